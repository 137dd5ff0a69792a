#include "treelim/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "treelim/errors.hpp"

namespace treelim {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::string probability_field(const Rat& value, ArithmeticMode mode) {
    return mode == ArithmeticMode::Exact ? rat_string(value) : format_double(to_double(value));
}

}  // namespace

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report) {
    const ArithmeticMode mode = report.config.mode;
    os << "n,replicate,depth,class_code,empirical_p,limit_p,abs_err\n";
    for (const ClassRow& row : report.rows) {
        os << row.n << "," << row.replicate << "," << row.depth << "," << row.code << ","
           << probability_field(row.empirical_p, mode) << ",";
        if (report.has_limit) {
            os << probability_field(row.limit_p, mode) << ","
               << probability_field(row.abs_err, mode);
        } else {
            os << ",";
        }
        os << "\n";
    }
}

void write_summary_csv(std::ostream& os, const ConvergenceReport& report) {
    os << "n,mean_tv,sd_tv,stat_name,var_estimate\n";
    for (const NSummary& s : report.summaries) {
        const std::string mean_tv = report.has_limit ? format_double(s.mean_tv) : "";
        const std::string sd_tv = report.has_limit ? format_double(s.sd_tv) : "";
        for (const auto& [name, var] : s.stat_variance) {
            os << s.n << "," << mean_tv << "," << sd_tv << ",x_over_n[" << name << "],"
               << format_double(var) << "\n";
        }
        for (const auto& [code, sd] : s.class_freq_sd) {
            os << s.n << "," << mean_tv << "," << sd_tv << ",class_freq[" << code << "],"
               << format_double(sd * sd) << "\n";
        }
    }
}

nlohmann::json report_json(const ConvergenceReport& report) {
    nlohmann::json j;
    j["config"] = config_json(report.config);
    j["config_hash"] = report.hash;
    j["has_limit"] = report.has_limit;

    nlohmann::json summaries = nlohmann::json::array();
    for (const NSummary& s : report.summaries) {
        nlohmann::json js;
        js["n"] = s.n;
        if (report.has_limit) {
            js["mean_tv"] = format_double(s.mean_tv);
            js["sd_tv"] = format_double(s.sd_tv);
        }
        nlohmann::json vars = nlohmann::json::object();
        for (const auto& [name, var] : s.stat_variance) vars[name] = format_double(var);
        js["stat_variance"] = vars;
        nlohmann::json sds = nlohmann::json::object();
        for (const auto& [code, sd] : s.class_freq_sd) sds[code] = format_double(sd);
        js["class_freq_sd"] = sds;
        summaries.push_back(js);
    }
    j["summaries"] = summaries;

    nlohmann::json rows = nlohmann::json::array();
    for (const ClassRow& row : report.rows) {
        nlohmann::json jr;
        jr["n"] = row.n;
        jr["replicate"] = row.replicate;
        jr["depth"] = row.depth;
        jr["code"] = row.code;
        jr["empirical_p"] = rat_string(row.empirical_p);
        if (report.has_limit) {
            jr["limit_p"] = rat_string(row.limit_p);
            jr["abs_err"] = rat_string(row.abs_err);
        }
        rows.push_back(jr);
    }
    j["rows"] = rows;
    return j;
}

nlohmann::json ball_distribution_json(const BallDistribution& dist) {
    nlohmann::json j;
    j["depth"] = dist.depth;
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& [code, p] : dist.classes) {
        nlohmann::json jc;
        jc["code"] = code.code;
        jc["p_num"] = numerator(p).str();
        jc["p_den"] = denominator(p).str();
        classes.push_back(jc);
    }
    j["classes"] = classes;
    j["deficit"] = rat_string(dist.deficit);
    return j;
}

void emit_reports(const ConvergenceReport& report, const std::string& out_dir) {
    const std::string dir = out_dir.empty() ? report.config.out_dir : out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("emit_reports: cannot create " + dir + ": " + ec.message());

    auto write_file = [&](const std::string& name, const auto& writer) {
        const std::string path = dir + "/" + name;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw Error("emit_reports: cannot open " + path);
        writer(os);
        if (!os) throw Error("emit_reports: write failed for " + path);
    };
    write_file("convergence.csv", [&](std::ostream& os) { write_convergence_csv(os, report); });
    write_file("summary.csv", [&](std::ostream& os) { write_summary_csv(os, report); });
    write_file("report.json", [&](std::ostream& os) { os << report_json(report).dump(2) << "\n"; });
}

}  // namespace treelim
