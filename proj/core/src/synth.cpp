#include "lppls/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace lppls {

void SynthSpec::validate() const {
    if (n_days < 2) throw std::invalid_argument("n_days must be at least 2");
    if (!(params.tc > n_days - 1)) {
        throw std::invalid_argument("tc must lie beyond the generated range (tc > n_days - 1)");
    }
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw std::invalid_argument("noise_sigma must be finite and nonnegative");
    }
    if (!(params.m > 0.0) || !std::isfinite(params.omega)) {
        throw std::invalid_argument("m must be positive and omega finite");
    }
}

SynthSpec paper_like() {
    SynthSpec s;
    s.params = {.tc = 520.0, .m = 0.5, .omega = 9.0, .A = 8.0, .B = -0.033, .C1 = 0.0012,
                .C2 = 0.0010};
    s.n_days = 500;
    return s;
}

PriceSeries generate(const SynthSpec& spec) {
    spec.validate();
    const auto n = static_cast<std::size_t>(spec.n_days);
    std::vector<Date> dates(n);
    std::vector<double> closes(n);

    Date d = spec.start_date;
    while (!is_weekday(d)) d = add_days(d, 1);

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        dates[i] = d;
        d = add_business_days(d, 1);
        double lp = lppls_eval(spec.params, static_cast<double>(i));
        if (spec.noise_sigma > 0.0) lp += spec.noise_sigma * noise(rng);
        closes[i] = std::exp(lp);
    }
    return PriceSeries(std::move(dates), std::move(closes));
}

void write_synth_csv(const SynthSpec& spec, const std::filesystem::path& path) {
    write_csv(generate(spec), path);
}

}  // namespace lppls
