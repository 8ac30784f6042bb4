#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tensor1/semantics.hpp"

namespace tensor1::sem {

using nlohmann::json;

std::string format_diagnostic(const Diagnostic& d) {
    std::ostringstream os;
    os << (d.severity == Severity::Error ? "error" : "warning") << " " << errc_name(d.code)
       << " " << d.span.line << ":" << d.span.column << " " << d.message;
    return os.str();
}

bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::Error) return true;
    return false;
}

void Environment::claim(const std::string& name) {
    if (name.empty() || bound(name))
        throw EngineError(Errc::SchemaError, "environment name '" + name +
                                                 "' is empty or already bound");
}

void Environment::add_chart(const std::string& name, ChartPtr chart) {
    claim(name);
    charts_[name] = std::move(chart);
}
void Environment::add_frame(const std::string& name, FramePtr frame) {
    claim(name);
    frames_[name] = std::move(frame);
}
void Environment::add_tensor(const std::string& name, TensorValue tensor) {
    claim(name);
    tensors_.emplace(name, std::move(tensor));
}
void Environment::add_tuple(const std::string& name, ValueList values) {
    claim(name);
    tuples_.emplace(name, std::move(values));
}
void Environment::add_scalar(const std::string& name, double value) {
    claim(name);
    scalars_[name] = value;
}

const ChartPtr* Environment::find_chart(const std::string& name) const {
    auto it = charts_.find(name);
    return it == charts_.end() ? nullptr : &it->second;
}
const FramePtr* Environment::find_frame(const std::string& name) const {
    auto it = frames_.find(name);
    return it == frames_.end() ? nullptr : &it->second;
}
const TensorValue* Environment::find_tensor(const std::string& name) const {
    auto it = tensors_.find(name);
    return it == tensors_.end() ? nullptr : &it->second;
}
const ValueList* Environment::find_tuple(const std::string& name) const {
    auto it = tuples_.find(name);
    return it == tuples_.end() ? nullptr : &it->second;
}
const double* Environment::find_scalar(const std::string& name) const {
    auto it = scalars_.find(name);
    return it == scalars_.end() ? nullptr : &it->second;
}

bool Environment::bound(const std::string& name) const {
    return charts_.count(name) || frames_.count(name) || tensors_.count(name) ||
           tuples_.count(name) || scalars_.count(name);
}

namespace {

const ChartPtr* default_chart(const std::string& name) {
    static const std::map<std::string, ChartPtr> builtins = {
        {"cartesian2", cartesian_chart(2)},
        {"cartesian3", cartesian_chart(3)},
        {"polar", polar_chart()},
        {"spherical", spherical_chart()},
    };
    auto it = builtins.find(name);
    return it == builtins.end() ? nullptr : &it->second;
}

}  // namespace

void add_builtin_charts(Environment& env) {
    for (const char* name : {"cartesian2", "cartesian3", "polar", "spherical"})
        env.add_chart(name, *default_chart(name));
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EngineError(Errc::IoError, "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) throw EngineError(Errc::IoError, "cannot read '" + path + "'");
    return os.str();
}

json parse_json(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw EngineError(Errc::SchemaError, what + ": malformed JSON");
    return j;
}

const json& require(const json& j, const char* key, const std::string& what) {
    if (!j.contains(key))
        throw EngineError(Errc::SchemaError, what + ": missing '" + key + "'");
    return j.at(key);
}

std::vector<ad::ExprPtr> parse_expr_list(const json& arr, int dim, const std::string& what) {
    if (!arr.is_array())
        throw EngineError(Errc::SchemaError, what + ": expected an array of expressions");
    std::vector<ad::ExprPtr> out;
    for (const auto& item : arr) {
        if (!item.is_string())
            throw EngineError(Errc::SchemaError, what + ": expressions must be strings");
        out.push_back(ad::parse_scalar(item.get<std::string>(), dim));
    }
    return out;
}

ChartPtr chart_from_json(const json& j) {
    if (!j.is_object()) throw EngineError(Errc::SchemaError, "chart: expected an object");
    std::string name = require(j, "name", "chart").get<std::string>();
    int dim = require(j, "dim", "chart '" + name + "'").get<int>();
    if (dim < 1)
        throw EngineError(Errc::SchemaError, "chart '" + name + "': dim must be positive");
    auto to = parse_expr_list(require(j, "to_cartesian", "chart '" + name + "'"), dim,
                              "chart '" + name + "' to_cartesian");
    std::vector<ad::ExprPtr> from;
    if (j.contains("from_cartesian"))
        from = parse_expr_list(j.at("from_cartesian"), dim, "chart '" + name + "' from_cartesian");
    return make_chart(std::move(name), dim, std::move(to), std::move(from));
}

std::vector<double> number_list(const json& arr, const std::string& what) {
    if (!arr.is_array())
        throw EngineError(Errc::SchemaError, what + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& item : arr) {
        if (!item.is_number())
            throw EngineError(Errc::SchemaError, what + ": expected numbers");
        out.push_back(item.get<double>());
    }
    return out;
}

Signature signature_from_json(const json& arr, const std::string& what) {
    if (!arr.is_array())
        throw EngineError(Errc::SchemaError, what + ": signature must be an array");
    Signature sig;
    for (const auto& item : arr) {
        std::string s = item.is_string() ? item.get<std::string>() : "";
        if (s == "contra")
            sig.push_back(Variance::Contra);
        else if (s == "covar")
            sig.push_back(Variance::Covar);
        else
            throw EngineError(Errc::SchemaError,
                              what + ": signature entries must be \"contra\" or \"covar\"");
    }
    return sig;
}

}  // namespace

ChartPtr load_chart_json(const std::string& json_text) {
    return chart_from_json(parse_json(json_text, "chart file"));
}

ChartPtr load_chart_file(const std::string& path) {
    return load_chart_json(read_file(path));
}

Environment load_environment_json(const std::string& json_text, const std::string& base_dir) {
    json j = parse_json(json_text, "environment file");
    if (!j.is_object()) throw EngineError(Errc::SchemaError, "environment: expected an object");

    Environment env;

    // File charts first; built-ins fill in the names the file leaves free,
    // so an environment may pin its own definition of e.g. "polar".
    if (j.contains("charts")) {
        const json& charts = j.at("charts");
        if (!charts.is_array())
            throw EngineError(Errc::SchemaError, "environment: 'charts' must be an array");
        for (const auto& entry : charts) {
            ChartPtr chart;
            if (entry.is_string()) {
                std::filesystem::path p(entry.get<std::string>());
                if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
                chart = load_chart_file(p.string());
            } else {
                chart = chart_from_json(entry);
            }
            env.add_chart(chart->name, chart);
        }
    }
    for (const char* name : {"cartesian2", "cartesian3", "polar", "spherical"})
        if (!env.bound(name)) env.add_chart(name, *default_chart(name));

    if (j.contains("frames")) {
        const json& frames = j.at("frames");
        if (!frames.is_array())
            throw EngineError(Errc::SchemaError, "environment: 'frames' must be an array");
        for (const auto& entry : frames) {
            std::string name = require(entry, "name", "frame").get<std::string>();
            std::string chart_name =
                require(entry, "chart", "frame '" + name + "'").get<std::string>();
            const ChartPtr* chart = env.find_chart(chart_name);
            if (!chart)
                throw EngineError(Errc::SchemaError,
                                  "frame '" + name + "': unknown chart '" + chart_name + "'");
            std::vector<double> point =
                number_list(require(entry, "point", "frame '" + name + "'"), "frame '" + name + "' point");
            env.add_frame(name, make_frame(*chart, std::move(point)));
        }
    }

    if (j.contains("tensors")) {
        const json& tensors = j.at("tensors");
        if (!tensors.is_array())
            throw EngineError(Errc::SchemaError, "environment: 'tensors' must be an array");
        for (const auto& entry : tensors) {
            std::string name = require(entry, "name", "tensor").get<std::string>();
            int dim = require(entry, "dim", "tensor '" + name + "'").get<int>();
            Signature sig = signature_from_json(require(entry, "signature", "tensor '" + name + "'"),
                                                "tensor '" + name + "'");
            std::vector<double> comps =
                number_list(require(entry, "components", "tensor '" + name + "'"),
                            "tensor '" + name + "' components");
            FramePtr frame;
            if (entry.contains("frame") && !entry.at("frame").is_null()) {
                std::string frame_name = entry.at("frame").get<std::string>();
                if (frame_name != om::kUnspecified) {
                    const FramePtr* f = env.find_frame(frame_name);
                    if (!f)
                        throw EngineError(Errc::SchemaError, "tensor '" + name +
                                                                 "': unknown frame '" +
                                                                 frame_name + "'");
                    frame = *f;
                }
            }
            try {
                env.add_tensor(name, make_tensor(dim, std::move(sig), std::move(comps), std::move(frame)));
            } catch (const EngineError& e) {
                if (e.code() == Errc::SchemaError) throw;
                throw EngineError(Errc::SchemaError,
                                  "tensor '" + name + "': " + std::string(e.what()));
            }
        }
    }

    if (j.contains("tuples")) {
        const json& tuples = j.at("tuples");
        if (!tuples.is_object())
            throw EngineError(Errc::SchemaError, "environment: 'tuples' must be an object");
        for (const auto& [name, arr] : tuples.items()) {
            ValueList vals;
            for (double x : number_list(arr, "tuple '" + name + "'")) vals.push_back(Value{x});
            env.add_tuple(name, std::move(vals));
        }
    }

    if (j.contains("scalars")) {
        const json& scalars = j.at("scalars");
        if (!scalars.is_object())
            throw EngineError(Errc::SchemaError, "environment: 'scalars' must be an object");
        for (const auto& [name, value] : scalars.items()) {
            if (!value.is_number())
                throw EngineError(Errc::SchemaError, "scalar '" + name + "': expected a number");
            env.add_scalar(name, value.get<double>());
        }
    }

    return env;
}

Environment load_environment_file(const std::string& path) {
    std::string dir = std::filesystem::path(path).parent_path().string();
    return load_environment_json(read_file(path), dir);
}

}  // namespace tensor1::sem
