#include "lppls/fit_store.hpp"

#include <cstdio>
#include <fstream>

#include "lppls/errors.hpp"

namespace lppls {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

}  // namespace

std::string format_fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

json report_to_json(const QualificationReport& r) {
    return json{
        {"passed", r.passed},
        {"m_bound", r.m_bound},
        {"omega_bound", r.omega_bound},
        {"tc_bound", r.tc_bound},
        {"oscillation_count", r.oscillation_count},
        {"max_relative_error", r.max_relative_error},
        {"lomb_significance", r.lomb_significance},
        {"ar1_residuals", r.ar1_residuals},
        {"spectral_evaluated", r.spectral_evaluated},
        {"diagnostics",
         {{"oscillation", r.oscillation},
          {"max_rel_error", r.max_rel_error},
          {"lomb_peak_power", r.lomb_peak_power},
          {"lomb_peak_omega", r.lomb_peak_omega},
          {"lomb_false_alarm", r.lomb_false_alarm},
          {"ar1_statistic", r.ar1_statistic}}},
        {"bubble_sign", std::string(to_string(r.bubble_sign))},
    };
}

json fit_to_json(const FitResult& fit, const PriceSeries& series) {
    json j;
    j["t1_index"] = fit.window.t1;
    j["t2_index"] = fit.window.t2;
    j["t1_date"] = format_date(series.date(fit.window.t1));
    j["t2_date"] = format_date(series.date(fit.window.t2));
    j["fitted"] = fit.fitted;
    j["seed"] = fit.seed;
    if (fit.fitted) {
        const auto& p = fit.params;
        const auto tc_date = index_to_fractional_date(series, p.tc);
        j["tc"] = p.tc;
        j["tc_date"] = format_date(tc_date.date);
        j["tc_fraction"] = tc_date.fraction;
        j["m"] = p.m;
        j["omega"] = p.omega;
        j["A"] = p.A;
        j["B"] = p.B;
        j["C1"] = p.C1;
        j["C2"] = p.C2;
        j["damping"] = p.damping();
        j["cost"] = fit.cost;
        j["evaluations"] = fit.evaluations;
    }
    const QualificationReport report = fit.qualification.value_or(QualificationReport{});
    j["bubble_sign"] = std::string(to_string(report.bubble_sign));
    j["filters"] = report_to_json(report);
    j["qualified"] = fit.qualified();
    return j;
}

json record_to_json(const FitRecord& record, const PriceSeries& series) {
    json j = fit_to_json(record.fit, series);
    j["endpoint_date"] = format_date(record.endpoint_date);
    return j;
}

FitRecord record_from_json(const json& j) {
    try {
        FitRecord rec;
        rec.endpoint_date = parse_date(j.at("endpoint_date").get<std::string>());
        auto& fit = rec.fit;
        fit.window = {j.at("t1_index").get<std::size_t>(), j.at("t2_index").get<std::size_t>()};
        fit.seed = j.at("seed").get<std::uint64_t>();
        fit.fitted = j.at("fitted").get<bool>();
        if (fit.fitted) {
            fit.params = {j.at("tc").get<double>(), j.at("m").get<double>(),
                          j.at("omega").get<double>(), j.at("A").get<double>(),
                          j.at("B").get<double>(), j.at("C1").get<double>(),
                          j.at("C2").get<double>()};
            fit.cost = j.at("cost").get<double>();
            fit.evaluations = j.value("evaluations", 0);
        }
        const auto& f = j.at("filters");
        QualificationReport r;
        r.passed = f.at("passed").get<bool>();
        r.m_bound = f.at("m_bound").get<bool>();
        r.omega_bound = f.at("omega_bound").get<bool>();
        r.tc_bound = f.at("tc_bound").get<bool>();
        r.oscillation_count = f.at("oscillation_count").get<bool>();
        r.max_relative_error = f.at("max_relative_error").get<bool>();
        r.lomb_significance = f.at("lomb_significance").get<bool>();
        r.ar1_residuals = f.at("ar1_residuals").get<bool>();
        r.spectral_evaluated = f.value("spectral_evaluated", false);
        if (f.contains("diagnostics")) {
            const auto& d = f.at("diagnostics");
            r.oscillation = d.value("oscillation", 0.0);
            r.max_rel_error = d.value("max_rel_error", 0.0);
            r.lomb_peak_power = d.value("lomb_peak_power", 0.0);
            r.lomb_peak_omega = d.value("lomb_peak_omega", 0.0);
            r.lomb_false_alarm = d.value("lomb_false_alarm", 1.0);
            r.ar1_statistic = d.value("ar1_statistic", 0.0);
        }
        r.bubble_sign = parse_bubble_sign(j.at("bubble_sign").get<std::string>());
        fit.qualification = r;
        return rec;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed fit record: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("malformed fit record: ") + e.what());
    }
}

void write_fit_store(const std::filesystem::path& path, std::span<const FitRecord> records,
                     const PriceSeries& series) {
    auto out = open_out(path);
    for (const auto& rec : records) out << record_to_json(rec, series).dump() << '\n';
}

std::vector<FitRecord> read_fit_store(const std::filesystem::path& path,
                                      const PriceSeries* series) {
    std::ifstream in(path);
    if (!in) throw DataError("file not found: " + path.string());
    std::vector<FitRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError(path.filename().string() + ":" + std::to_string(line_no) + ": " +
                            e.what());
        }
        auto rec = record_from_json(j);
        if (series) {
            const auto& w = rec.fit.window;
            if (w.t2 >= series->size() ||
                format_date(series->date(w.t1)) != j.at("t1_date").get<std::string>() ||
                format_date(series->date(w.t2)) != j.at("t2_date").get<std::string>()) {
                throw DataError("fit store line " + std::to_string(line_no) +
                                " does not match the price series");
            }
        }
        out.push_back(std::move(rec));
    }
    return out;
}

void write_indicator_csv(const std::filesystem::path& path,
                         std::span<const ConfidencePoint> rows) {
    auto out = open_out(path);
    out << "endpoint_date,positive_ci,negative_ci,windows_total,windows_fitted,"
           "qualified_positive,qualified_negative,short_history_flag\n";
    for (const auto& r : rows) {
        out << format_date(r.endpoint_date) << ',' << format_fixed(r.positive_ci, 6) << ','
            << format_fixed(r.negative_ci, 6) << ',' << r.windows_total << ','
            << r.windows_fitted << ',' << r.qualified_positive << ',' << r.qualified_negative
            << ',' << (r.short_history ? 1 : 0) << '\n';
    }
}

void write_indicator_json(const std::filesystem::path& path,
                          std::span<const ConfidencePoint> rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"endpoint_date", format_date(r.endpoint_date)},
                       {"positive_ci", r.positive_ci},
                       {"negative_ci", r.negative_ci},
                       {"windows_total", r.windows_total},
                       {"windows_fitted", r.windows_fitted},
                       {"qualified_positive", r.qualified_positive},
                       {"qualified_negative", r.qualified_negative},
                       {"short_history_flag", r.short_history}});
    }
    auto out = open_out(path);
    out << arr.dump(2) << '\n';
}

}  // namespace lppls
