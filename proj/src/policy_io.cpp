#include "dimpol/policy_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include "dimpol/errors.hpp"
#include "dimpol/version.hpp"

namespace dimpol {

namespace {

constexpr const char* kMagic = "dimpol-policy-v1";

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += fmt_double(values[i]);
    }
    return out;
}

std::vector<double> split_doubles(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError("bad number '" + item + "' in " + what);
        }
    }
    return out;
}

// Writes to a sibling temp file first so readers never observe a torn file.
class AtomicWriter {
  public:
    explicit AtomicWriter(const std::filesystem::path& path)
        : final_(path), tmp_(path.string() + ".tmp"), out_(tmp_, std::ios::trunc) {
        if (!out_) throw Error("cannot open '" + tmp_.string() + "' for writing");
    }

    std::ofstream& stream() { return out_; }

    void commit() {
        out_.flush();
        if (!out_) throw Error("write to '" + tmp_.string() + "' failed");
        out_.close();
        std::filesystem::rename(tmp_, final_);
        committed_ = true;
    }

    ~AtomicWriter() {
        if (!committed_) {
            std::error_code ec;
            std::filesystem::remove(tmp_, ec);
        }
    }

  private:
    std::filesystem::path final_;
    std::filesystem::path tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

void write_common_header(std::ofstream& os, const std::vector<GridAxis>& axes,
                         const ContextMeta& meta) {
    os << "# " << kMagic << "\n";
    os << "# tool=" << kToolName << " " << kToolVersion << "\n";
    os << "# system=" << meta.system << "\n";
    os << "# dimensionless=" << (meta.dimensionless ? 1 : 0) << "\n";
    os << "# approximate=" << (meta.approximate ? 1 : 0) << "\n";
    os << "# context=" << join_doubles(meta.context) << "\n";
    os << "# context_star=" << join_doubles(meta.context_star) << "\n";
    os << "# axes=" << axes.size() << "\n";
    for (std::size_t i = 0; i < axes.size(); ++i) {
        os << "# axis" << i << "=" << axes[i].name << "," << fmt_double(axes[i].lo) << ","
           << fmt_double(axes[i].hi) << "," << axes[i].count << "\n";
    }
}

struct Header {
    std::map<std::string, std::string> kv;
    bool has(const std::string& key) const { return kv.count(key) != 0; }
    const std::string& get(const std::string& key) const {
        auto it = kv.find(key);
        if (it == kv.end()) throw ParseError("policy file is missing header key '" + key + "'");
        return it->second;
    }
};

}  // namespace

void write_policy_file(const std::filesystem::path& path, const PolicyFileData& data) {
    const TabularPolicy& p = data.policy;
    AtomicWriter writer(path);
    auto& os = writer.stream();

    write_common_header(os, p.axes(), p.meta());
    os << "# outputs=" << p.output_dim() << "\n";
    os << "# interp=" << (p.interp() == Interp::nearest ? "nearest" : "multilinear") << "\n";
    os << "# oob=" << (p.oob() == OobPolicy::error ? "error" : "clamp") << "\n";
    if (data.has_control_info()) {
        os << "# control_lo=" << fmt_double(data.control_lo) << "\n";
        os << "# control_hi=" << fmt_double(data.control_hi) << "\n";
        os << "# control_count=" << data.control_count << "\n";
    }

    for (std::size_t i = 0; i < p.state_dim(); ++i) os << "i" << i << ",";
    for (std::size_t j = 0; j < p.output_dim(); ++j) os << (j ? "," : "") << "u" << j;
    os << "\n";

    std::vector<std::size_t> idx(p.state_dim(), 0);
    for (std::size_t node = 0; node < p.node_count(); ++node) {
        for (std::size_t i = 0; i < p.state_dim(); ++i) os << idx[i] << ",";
        const auto v = p.node_value(node);
        for (std::size_t j = 0; j < p.output_dim(); ++j)
            os << (j ? "," : "") << fmt_double(v[j]);
        os << "\n";
        for (std::size_t i = p.state_dim(); i-- > 0;) {
            if (++idx[i] < p.axes()[i].count) break;
            idx[i] = 0;
        }
    }
    writer.commit();
}

PolicyFileData read_policy_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open policy file '" + path.string() + "'");

    Header header;
    std::string line;
    std::streampos data_start = 0;
    bool magic_seen = false;
    while (std::getline(is, line)) {
        if (line.empty()) {
            data_start = is.tellg();
            continue;
        }
        if (line[0] != '#') break;
        std::string body = line.substr(1);
        if (!body.empty() && body[0] == ' ') body = body.substr(1);
        if (body == kMagic) {
            magic_seen = true;
        } else {
            const auto eq = body.find('=');
            if (eq != std::string::npos)
                header.kv[body.substr(0, eq)] = body.substr(eq + 1);
        }
        data_start = is.tellg();
    }
    if (!magic_seen) throw ParseError("'" + path.string() + "' is not a policy file");

    const std::size_t n_axes = static_cast<std::size_t>(std::stoul(header.get("axes")));
    std::vector<GridAxis> axes(n_axes);
    for (std::size_t i = 0; i < n_axes; ++i) {
        const std::string& spec = header.get("axis" + std::to_string(i));
        std::stringstream ss(spec);
        std::string name, lo, hi, count;
        if (!std::getline(ss, name, ',') || !std::getline(ss, lo, ',') ||
            !std::getline(ss, hi, ',') || !std::getline(ss, count, ','))
            throw ParseError("bad axis line '" + spec + "'");
        axes[i] = {name, std::stod(lo), std::stod(hi),
                   static_cast<std::size_t>(std::stoul(count))};
    }

    const std::size_t outputs = static_cast<std::size_t>(std::stoul(header.get("outputs")));
    ContextMeta meta;
    meta.system = header.get("system");
    meta.dimensionless = header.get("dimensionless") == "1";
    meta.approximate = header.get("approximate") == "1";
    meta.context = split_doubles(header.get("context"), "context");
    meta.context_star = split_doubles(header.get("context_star"), "context_star");
    const Interp interp =
        header.get("interp") == "nearest" ? Interp::nearest : Interp::multilinear;
    const OobPolicy oob = header.get("oob") == "error" ? OobPolicy::error : OobPolicy::clamp;

    const std::size_t nodes = grid_node_count(axes);
    std::vector<double> values;
    values.reserve(nodes * outputs);

    // The loop above stopped at the column header row; data rows follow.
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto fields = split_doubles(line, "row " + std::to_string(row));
        if (fields.size() != n_axes + outputs)
            throw ParseError("row " + std::to_string(row) + " has " +
                             std::to_string(fields.size()) + " fields");
        for (std::size_t j = 0; j < outputs; ++j) values.push_back(fields[n_axes + j]);
        ++row;
    }
    if (row != nodes)
        throw ParseError("policy file has " + std::to_string(row) + " rows, expected " +
                         std::to_string(nodes));

    PolicyFileData data{
        TabularPolicy(std::move(axes), outputs, std::move(values), interp, oob,
                      std::move(meta)),
    };
    if (header.has("control_count")) {
        data.control_lo = std::stod(header.get("control_lo"));
        data.control_hi = std::stod(header.get("control_hi"));
        data.control_count = static_cast<std::size_t>(std::stoul(header.get("control_count")));
    }
    return data;
}

void write_field_file(const std::filesystem::path& path, const std::vector<GridAxis>& axes,
                      const std::vector<double>& values, const std::string& column,
                      const ContextMeta& meta) {
    if (values.size() != grid_node_count(axes))
        throw Error("field size does not match the grid");
    AtomicWriter writer(path);
    auto& os = writer.stream();
    write_common_header(os, axes, meta);

    for (std::size_t i = 0; i < axes.size(); ++i) os << "i" << i << ",";
    os << column << "\n";
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t node = 0; node < values.size(); ++node) {
        for (std::size_t i = 0; i < axes.size(); ++i) os << idx[i] << ",";
        os << fmt_double(values[node]) << "\n";
        for (std::size_t i = axes.size(); i-- > 0;) {
            if (++idx[i] < axes[i].count) break;
            idx[i] = 0;
        }
    }
    writer.commit();
}

void write_residual_file(const std::filesystem::path& path,
                         const std::vector<double>& residuals) {
    AtomicWriter writer(path);
    auto& os = writer.stream();
    os << "iteration,residual\n";
    for (std::size_t i = 0; i < residuals.size(); ++i)
        os << i << "," << fmt_double(residuals[i]) << "\n";
    writer.commit();
}

}  // namespace dimpol
