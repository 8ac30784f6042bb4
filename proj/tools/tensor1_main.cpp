#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tensor1/cd.hpp"
#include "tensor1/config.hpp"
#include "tensor1/errors.hpp"
#include "tensor1/om_ast.hpp"
#include "tensor1/semantics.hpp"
#include "tensor1/value_io.hpp"

namespace {

using namespace tensor1;

struct CommonOpts {
    std::string input = "-";
    std::string env_path;
    std::string frame_name;
    std::string format = "text";
    std::string out_path;
    bool compact = false;
};

sem::OutputFormat parse_format(const std::string& f) {
    if (f == "text") return sem::OutputFormat::Text;
    if (f == "json") return sem::OutputFormat::Json;
    if (f == "xml") return sem::OutputFormat::Xml;
    throw EngineError(Errc::SchemaError, "unknown output format '" + f + "'");
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EngineError(Errc::IoError, "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) throw EngineError(Errc::IoError, "cannot read '" + path + "'");
    return os.str();
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw EngineError(Errc::IoError, "cannot open '" + out_path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw EngineError(Errc::IoError, "cannot write '" + out_path + "'");
}

om::NodePtr parse_node(const CommonOpts& opts) {
    std::string text = read_input(opts.input);
    return opts.compact ? om::parse_compact(text) : om::parse_xml(text);
}

void print_error(const EngineError& e) {
    std::cerr << "error " << errc_name(e.code());
    if (e.span()) std::cerr << " " << e.span()->line << ":" << e.span()->column;
    std::cerr << " " << e.what() << "\n";
}

sem::Environment load_env(const CommonOpts& opts, bool required) {
    if (opts.env_path.empty()) {
        if (required)
            throw EngineError(Errc::SchemaError, "this command requires --env PATH");
        sem::Environment env;
        sem::add_builtin_charts(env);
        return env;
    }
    return sem::load_environment_file(opts.env_path);
}

FramePtr context_frame(const sem::Environment& env, const std::string& name) {
    if (name.empty()) return nullptr;
    const FramePtr* f = env.find_frame(name);
    if (!f) throw EngineError(Errc::UnknownFrame, "unknown frame '" + name + "'");
    return *f;
}

int cmd_parse(const CommonOpts& opts) {
    om::NodePtr node = parse_node(opts);
    sem::OutputFormat fmt = parse_format(opts.format);
    if (fmt == sem::OutputFormat::Json) {
        // one-line structural dump, mainly for scripting
        std::function<std::string(const om::OMNode&)> dump = [&](const om::OMNode& n) -> std::string {
            if (const auto* s = n.get_if<om::Symbol>())
                return "{\"kind\": \"symbol\", \"cd\": \"" + s->cd + "\", \"name\": \"" + s->name + "\"}";
            if (const auto* v = n.get_if<om::Variable>())
                return "{\"kind\": \"variable\", \"name\": \"" + v->name + "\"}";
            if (const auto* i = n.get_if<om::Integer>())
                return "{\"kind\": \"integer\", \"value\": " + i->digits + "}";
            if (const auto* f = n.get_if<om::Float>())
                return "{\"kind\": \"float\", \"value\": " + sem::format_real(f->value, sem::OutputFormat::Json) + "}";
            if (const auto* a = n.get_if<om::Application>()) {
                std::string out = "{\"kind\": \"apply\", \"head\": " + dump(*a->head) + ", \"args\": [";
                for (std::size_t i = 0; i < a->args.size(); ++i)
                    out += (i ? ", " : "") + dump(*a->args[i]);
                return out + "]}";
            }
            const auto* s = n.get_if<om::SumBinder>();
            return "{\"kind\": \"sum\", \"var\": \"" + s->var + "\", \"lower\": " + dump(*s->lower) +
                   ", \"upper\": " + dump(*s->upper) + ", \"body\": " + dump(*s->body) + "}";
        };
        write_output(opts.out_path, dump(*node) + "\n");
    } else {
        write_output(opts.out_path, om::serialize_xml(*node));
    }
    return 0;
}

int cmd_validate(const CommonOpts& opts) {
    om::NodePtr node = parse_node(opts);
    sem::Environment env = load_env(opts, false);
    std::vector<sem::Diagnostic> diags = sem::validate(*node, env);
    std::ostringstream os;
    for (const auto& d : diags) os << sem::format_diagnostic(d) << "\n";
    write_output(opts.out_path, os.str());
    return sem::has_errors(diags) ? 1 : 0;
}

int cmd_eval(const CommonOpts& opts) {
    sem::Environment env = load_env(opts, true);
    om::NodePtr node = parse_node(opts);
    std::vector<sem::Diagnostic> diags = sem::validate(*node, env);
    for (const auto& d : diags) std::cerr << sem::format_diagnostic(d) << "\n";
    if (sem::has_errors(diags)) return 1;
    sem::Value value = sem::evaluate(*node, env, context_frame(env, opts.frame_name));
    write_output(opts.out_path, sem::format_value(value, parse_format(opts.format)));
    return 0;
}

int cmd_frame_info(const CommonOpts& opts) {
    sem::Environment env = load_env(opts, true);
    if (opts.frame_name.empty())
        throw EngineError(Errc::SchemaError, "frame-info requires --frame NAME");
    FramePtr frame = context_frame(env, opts.frame_name);
    write_output(opts.out_path,
                 sem::format_frame_info(opts.frame_name, *frame, parse_format(opts.format)));
    return 0;
}

int cmd_transform(const CommonOpts& opts, const std::string& tensor_name) {
    sem::Environment env = load_env(opts, true);
    if (opts.frame_name.empty())
        throw EngineError(Errc::SchemaError, "transform requires --frame NAME");
    const TensorValue* t = env.find_tensor(tensor_name);
    if (!t) throw EngineError(Errc::UnboundVariable, "unknown tensor '" + tensor_name + "'");
    FramePtr target = context_frame(env, opts.frame_name);
    TensorValue out = transform(*t, target);
    write_output(opts.out_path, sem::format_tensor(out, parse_format(opts.format)));
    return 0;
}

int cmd_emit_cd(const CommonOpts& opts) {
    write_output(opts.out_path, emit_tensor1_cd());
    return 0;
}

void apply_env_overrides() {
    if (const char* cap = std::getenv("TENSOR1_MAX_ORDER")) {
        char* end = nullptr;
        long v = std::strtol(cap, &end, 10);
        if (end == cap || *end != '\0' || v < 1 || v > 64)
            throw EngineError(Errc::SchemaError,
                              std::string("TENSOR1_MAX_ORDER must be a positive integer, got '") +
                                  cap + "'");
        limits().max_order = static_cast<int>(v);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tensor formula engine for the tensor1 OpenMath dictionary"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string tensor_name;

    auto add_common = [&](CLI::App* cmd, bool with_input) {
        if (with_input)
            cmd->add_option("input", opts.input, "input file, or - for stdin")->capture_default_str();
        cmd->add_option("--env", opts.env_path, "environment JSON file");
        cmd->add_option("--frame", opts.frame_name, "frame name from the environment");
        cmd->add_option("--format", opts.format, "output format: text, json or xml")
            ->check(CLI::IsMember({"text", "json", "xml"}));
        cmd->add_option("--out", opts.out_path, "output file (default stdout)");
        if (with_input) cmd->add_flag("--compact", opts.compact, "input uses the compact grammar");
        return cmd;
    };

    CLI::App* parse = add_common(app.add_subcommand("parse", "parse and print canonical XML"), true);
    CLI::App* validate =
        add_common(app.add_subcommand("validate", "run semantic validation"), true);
    CLI::App* eval = add_common(app.add_subcommand("eval", "evaluate an expression"), true);
    CLI::App* frame_info =
        add_common(app.add_subcommand("frame-info", "print basis, dual basis and metric"), false);
    CLI::App* transform_cmd =
        add_common(app.add_subcommand("transform", "transform a named tensor into a frame"), false);
    transform_cmd->add_option("tensor", tensor_name, "tensor name from the environment")
        ->required();
    CLI::App* emit_cd =
        add_common(app.add_subcommand("emit-cd", "write the tensor1 content dictionary"), false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 4;
    }

    try {
        apply_env_overrides();
        if (parse->parsed()) return cmd_parse(opts);
        if (validate->parsed()) return cmd_validate(opts);
        if (eval->parsed()) return cmd_eval(opts);
        if (frame_info->parsed()) return cmd_frame_info(opts);
        if (transform_cmd->parsed()) return cmd_transform(opts, tensor_name);
        if (emit_cd->parsed()) return cmd_emit_cd(opts);
    } catch (const EngineError& e) {
        print_error(e);
        return errc_exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error Internal " << e.what() << "\n";
        return 1;
    }
    return 0;
}
