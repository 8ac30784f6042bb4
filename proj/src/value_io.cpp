#include "tensor1/value_io.hpp"

#include <cstdio>
#include <sstream>

#include "tensor1/xml.hpp"

namespace tensor1::sem {

std::string format_real(double v, OutputFormat f) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), f == OutputFormat::Text ? "%.6g" : "%.17g", v);
    return buf;
}

namespace {

std::string frame_tag_text(const FramePtr& f) {
    if (!f) return "unspecified";
    std::ostringstream os;
    os << f->chart->name << " @ (";
    for (std::size_t i = 0; i < f->point.size(); ++i)
        os << (i ? ", " : "") << format_real(f->point[i], OutputFormat::Text);
    os << ")";
    return os.str();
}

std::string json_list(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_real(v[i], OutputFormat::Json);
    }
    return out + "]";
}

std::string json_frame(const FramePtr& f) {
    if (!f) return "\"unspecified\"";
    std::string out = "{\"chart\": \"" + f->chart->name + "\", \"point\": " + json_list(f->point) + "}";
    return out;
}

std::string json_signature(const Signature& sig) {
    std::string out = "[";
    for (std::size_t i = 0; i < sig.size(); ++i) {
        if (i) out += ", ";
        out += std::string("\"") + variance_name(sig[i]) + "\"";
    }
    return out + "]";
}

std::string tensor_json(const TensorValue& t) {
    std::string out = "{\"kind\": \"tensor\", \"dim\": " + std::to_string(t.dim) +
                      ", \"signature\": " + json_signature(t.signature) +
                      ", \"components\": " + json_list(t.components) +
                      ", \"frame\": " + json_frame(t.frame) + "}";
    return out;
}

std::string tensor_text(const TensorValue& t) {
    std::ostringstream os;
    os << "tensor dim=" << t.dim << " signature=[";
    for (std::size_t i = 0; i < t.signature.size(); ++i)
        os << (i ? " " : "") << variance_name(t.signature[i]);
    os << "] frame=" << frame_tag_text(t.frame) << "\n  components: [";
    for (std::size_t i = 0; i < t.components.size(); ++i)
        os << (i ? ", " : "") << format_real(t.components[i], OutputFormat::Text);
    os << "]";
    return os.str();
}

std::string tensor_xml(const TensorValue& t, int depth) {
    std::string pad(2 * static_cast<std::size_t>(depth), ' ');
    std::ostringstream os;
    os << pad << "<tensor dim=\"" << t.dim << "\" frame=\"" << xml::escape_attr(frame_tag_text(t.frame))
       << "\">\n";
    os << pad << "  <signature>";
    for (std::size_t i = 0; i < t.signature.size(); ++i)
        os << (i ? " " : "") << variance_name(t.signature[i]);
    os << "</signature>\n";
    os << pad << "  <components>";
    for (std::size_t i = 0; i < t.components.size(); ++i)
        os << (i ? " " : "") << format_real(t.components[i], OutputFormat::Xml);
    os << "</components>\n";
    os << pad << "</tensor>";
    return os.str();
}

std::string value_json(const Value& v);

std::string tuple_json(const ValueList& items) {
    std::string out = "{\"kind\": \"tuple\", \"items\": [";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += value_json(items[i]);
    }
    return out + "]}";
}

std::string value_json(const Value& v) {
    if (v.is_scalar())
        return "{\"kind\": \"scalar\", \"value\": " + format_real(v.scalar(), OutputFormat::Json) + "}";
    if (const TensorValue* t = v.tensor()) return tensor_json(*t);
    if (const ValueList* items = v.tuple()) return tuple_json(*items);
    if (const IndexKind* ix = v.index())
        return std::string("{\"kind\": \"index\", \"variance\": \"") + variance_name(ix->variance) +
               "\", \"value\": " + std::to_string(ix->value) + "}";
    if (const FrameRef* f = v.frame_ref())
        return "{\"kind\": \"frame\", \"name\": \"" + f->name + "\", \"frame\": " +
               json_frame(f->frame) + "}";
    return "{\"kind\": \"chart\", \"name\": \"" + std::get<ChartRef>(v.v).chart->name + "\"}";
}

std::string value_text(const Value& v) {
    if (v.is_scalar()) return format_real(v.scalar(), OutputFormat::Text);
    if (const TensorValue* t = v.tensor()) return tensor_text(*t);
    if (const ValueList* items = v.tuple()) {
        std::string out = "(";
        for (std::size_t i = 0; i < items->size(); ++i) {
            if (i) out += ", ";
            out += value_text((*items)[i]);
        }
        return out + ")";
    }
    if (const IndexKind* ix = v.index())
        return std::string(variance_name(ix->variance)) + "_index(" + std::to_string(ix->value) + ")";
    if (const FrameRef* f = v.frame_ref()) return "frame " + frame_tag_text(f->frame);
    return "chart " + std::get<ChartRef>(v.v).chart->name;
}

std::string value_xml(const Value& v, int depth) {
    std::string pad(2 * static_cast<std::size_t>(depth), ' ');
    if (v.is_scalar())
        return pad + "<scalar>" + format_real(v.scalar(), OutputFormat::Xml) + "</scalar>";
    if (const TensorValue* t = v.tensor()) return tensor_xml(*t, depth);
    if (const ValueList* items = v.tuple()) {
        std::string out = pad + "<tuple>\n";
        for (const Value& item : *items) out += value_xml(item, depth + 1) + "\n";
        return out + pad + "</tuple>";
    }
    if (const IndexKind* ix = v.index())
        return pad + "<index variance=\"" + variance_name(ix->variance) + "\" value=\"" +
               std::to_string(ix->value) + "\"/>";
    if (const FrameRef* f = v.frame_ref())
        return pad + "<frame name=\"" + xml::escape_attr(f->name) + "\"/>";
    return pad + "<chart name=\"" + xml::escape_attr(std::get<ChartRef>(v.v).chart->name) + "\"/>";
}

std::string matrix_rows_json(const Mat& m) {
    std::string out = "[";
    for (int i = 0; i < m.n; ++i) {
        if (i) out += ", ";
        out += "[";
        for (int j = 0; j < m.n; ++j) {
            if (j) out += ", ";
            out += format_real(m.at(i, j), OutputFormat::Json);
        }
        out += "]";
    }
    return out + "]";
}

void matrix_rows_text(std::ostringstream& os, const Mat& m) {
    for (int i = 0; i < m.n; ++i) {
        os << "    [";
        for (int j = 0; j < m.n; ++j)
            os << (j ? ", " : "") << format_real(m.at(i, j), OutputFormat::Text);
        os << "]\n";
    }
}

}  // namespace

std::string format_value(const Value& v, OutputFormat f) {
    switch (f) {
        case OutputFormat::Text: return value_text(v) + "\n";
        case OutputFormat::Json: return value_json(v) + "\n";
        case OutputFormat::Xml: return value_xml(v, 0) + "\n";
    }
    return {};
}

std::string format_tensor(const TensorValue& t, OutputFormat f) {
    return format_value(Value{t}, f);
}

std::string format_frame_info(const std::string& name, const Frame& frame, OutputFormat f) {
    if (f == OutputFormat::Json) {
        std::string out = "{\"name\": \"" + name + "\", \"chart\": \"" + frame.chart->name +
                          "\", \"point\": " + json_list(frame.point) +
                          ", \"cartesian_point\": " + json_list(frame.cartesian_point) +
                          ", \"basis\": " + matrix_rows_json(frame.basis) +
                          ", \"dual_basis\": " + matrix_rows_json(frame.dual_basis) +
                          ", \"metric\": " + matrix_rows_json(frame.metric) +
                          ", \"inverse_metric\": " + matrix_rows_json(frame.inverse_metric) +
                          ", \"det_basis\": " + format_real(frame.det_basis, OutputFormat::Json) + "}";
        return out + "\n";
    }
    if (f == OutputFormat::Xml) {
        std::ostringstream os;
        os << "<frame name=\"" << xml::escape_attr(name) << "\" chart=\""
           << xml::escape_attr(frame.chart->name) << "\">\n";
        auto list = [&](const char* tag, const std::vector<double>& v) {
            os << "  <" << tag << ">";
            for (std::size_t i = 0; i < v.size(); ++i)
                os << (i ? " " : "") << format_real(v[i], OutputFormat::Xml);
            os << "</" << tag << ">\n";
        };
        auto matrix = [&](const char* tag, const Mat& m) {
            os << "  <" << tag << ">";
            for (std::size_t i = 0; i < m.a.size(); ++i)
                os << (i ? " " : "") << format_real(m.a[i], OutputFormat::Xml);
            os << "</" << tag << ">\n";
        };
        list("point", frame.point);
        list("cartesian_point", frame.cartesian_point);
        matrix("basis", frame.basis);
        matrix("dual_basis", frame.dual_basis);
        matrix("metric", frame.metric);
        matrix("inverse_metric", frame.inverse_metric);
        os << "  <det_basis>" << format_real(frame.det_basis, OutputFormat::Xml) << "</det_basis>\n";
        os << "</frame>\n";
        return os.str();
    }
    std::ostringstream os;
    os << "frame '" << name << "' chart " << frame.chart->name << "\n";
    os << "  point:           [";
    for (std::size_t i = 0; i < frame.point.size(); ++i)
        os << (i ? ", " : "") << format_real(frame.point[i], OutputFormat::Text);
    os << "]\n  cartesian point: [";
    for (std::size_t i = 0; i < frame.cartesian_point.size(); ++i)
        os << (i ? ", " : "") << format_real(frame.cartesian_point[i], OutputFormat::Text);
    os << "]\n  basis (column i is basis vector g_i):\n";
    matrix_rows_text(os, frame.basis);
    os << "  dual basis (row i is dual covector g^i):\n";
    matrix_rows_text(os, frame.dual_basis);
    os << "  metric:\n";
    matrix_rows_text(os, frame.metric);
    os << "  inverse metric:\n";
    matrix_rows_text(os, frame.inverse_metric);
    os << "  det(basis): " << format_real(frame.det_basis, OutputFormat::Text) << "\n";
    return os.str();
}

}  // namespace tensor1::sem
