#include "skewkrylov/report_io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "skewkrylov/errors.hpp"
#include "skewkrylov/matrix_market.hpp"

namespace skewkrylov {

using nlohmann::json;

namespace {

json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double to_number(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw ParseError("report: unexpected string '" + s + "' in numeric field", 0);
    }
    return j.get<double>();
}

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

std::optional<double> to_optional(const json& j) {
    if (j.is_null()) return std::nullopt;
    return to_number(j);
}

}  // namespace

std::string to_json(const RunReport& report, int indent) {
    json doc;
    const auto& inst = report.instance;
    doc["instance"] = {{"source", inst.source},
                       {"n", inst.n},
                       {"density", inst.density ? json(*inst.density) : json(nullptr)},
                       {"seed", inst.seed ? json(*inst.seed) : json(nullptr)}};

    json config = json::object();
    for (const auto& [k, v] : report.config) config[k] = number(v);
    doc["config"] = config;

    json checks = json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"check", c.check},
                          {"at", c.at},
                          {"deviation", number(c.deviation)},
                          {"tolerance", number(c.tolerance)},
                          {"pass", c.pass}});
    }
    doc["checks"] = checks;

    json table = json::array();
    for (const auto& r : report.table) {
        table.push_back({{"method", r.method},
                         {"q", r.q},
                         {"exists", r.exists},
                         {"residual_norm", optional_number(r.residual_norm)},
                         {"error_norm", optional_number(r.error_norm)},
                         {"alpha", optional_number(r.alpha)},
                         {"beta", optional_number(r.beta)},
                         {"applies", r.applies}});
    }
    doc["table"] = table;
    doc["notes"] = report.notes;
    doc["skipped"] = report.skipped;

    json families = json::object();
    for (const auto& [name, s] : report.summary()) {
        families[name] = {{"count", s.count},
                          {"failures", s.failures},
                          {"worst", number(s.worst)},
                          {"mean", number(s.mean)},
                          {"best", number(s.best)}};
    }
    doc["summary"] = {{"passed", report.passed()}, {"families", families}};
    return doc.dump(indent);
}

RunReport report_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("report: ") + e.what(), 0);
    }
    try {
        RunReport report;
        const auto& inst = doc.at("instance");
        report.instance.source = inst.at("source").get<std::string>();
        report.instance.n = inst.at("n").get<Index>();
        if (!inst.at("density").is_null()) report.instance.density = inst.at("density").get<double>();
        if (!inst.at("seed").is_null()) report.instance.seed = inst.at("seed").get<std::uint64_t>();

        for (const auto& [k, v] : doc.at("config").items()) report.config[k] = to_number(v);
        for (const auto& c : doc.at("checks")) {
            report.checks.push_back(CheckRecord{c.at("check").get<std::string>(),
                                                c.at("at").get<std::map<std::string, long long>>(),
                                                to_number(c.at("deviation")), to_number(c.at("tolerance")),
                                                c.at("pass").get<bool>()});
        }
        for (const auto& r : doc.at("table")) {
            report.table.push_back(MethodRow{r.at("method").get<std::string>(), r.at("q").get<int>(),
                                             r.at("exists").get<bool>(), to_optional(r.at("residual_norm")),
                                             to_optional(r.at("error_norm")), to_optional(r.at("alpha")),
                                             to_optional(r.at("beta")), r.at("applies").get<long>()});
        }
        report.notes = doc.at("notes").get<std::vector<std::string>>();
        report.skipped = doc.at("skipped").get<long>();
        return report;
    } catch (const json::exception& e) {
        throw ParseError(std::string("report: ") + e.what(), 0);
    }
}

int report_precision() {
    if (const char* env = std::getenv("SKEWKRYLOV_REPORT_PRECISION")) {
        char* end = nullptr;
        const long digits = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && digits >= 1 && digits <= 17) return static_cast<int>(digits);
    }
    return 17;
}

std::string history_csv(const std::vector<MethodRow>& rows, int significant_digits) {
    std::ostringstream out;
    auto field = [&](const std::optional<double>& v) {
        if (v) out << format_double(*v, significant_digits);
    };
    out << "method,q,res_norm,err_norm,alpha,beta\n";
    for (const auto& r : rows) {
        out << r.method << ',' << r.q << ',';
        field(r.residual_norm);
        out << ',';
        field(r.error_norm);
        out << ',';
        field(r.alpha);
        out << ',';
        field(r.beta);
        out << '\n';
    }
    return out.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing", IoError::Direction::output);
    out << text;
    if (!out) throw IoError("write to '" + path.string() + "' failed", IoError::Direction::output);
}

}  // namespace skewkrylov
