#include "support/planted.hpp"

#include "enas/rng.hpp"

#include <algorithm>
#include <cmath>

namespace enas::testing {

namespace {

constexpr int kVrWindow = 10;
constexpr double kVolumeSigma = 1.2;
// frozen standardization of VR_10, measured on a calibration run
constexpr double kVrMean = 0.47;
constexpr double kVrStd = 0.32;

}  // namespace

PlantedSeries generate_planted_series(const PlantedConfig& cfg, std::uint64_t seed) {
    Rng rng(mix_seed({seed, 0x504c414e54ULL}));  // "PLANT"

    PlantedSeries out;
    auto& bars = out.series.bars;
    bars.reserve(static_cast<std::size_t>(cfg.n_days));

    Date date{2017, 1, 2};  // a Monday; weekends are skipped
    int weekday = 0;

    double z_volume = rng.gaussian();
    OhlcvBar first;
    first.date = date;
    first.open = first.close = 100.0;
    first.high = 100.4;
    first.low = 99.6;
    first.volume = std::floor(1e6 * std::exp(kVolumeSigma * z_volume));
    bars.push_back(first);

    // VR_10 exactly as the indicator catalog computes it (current-inclusive)
    auto vr10 = [&](std::size_t t) {
        double uv = 0.0, dv = 0.0;
        for (std::size_t j = t - kVrWindow + 1; j <= t; ++j) {
            if (bars[j].close > bars[j - 1].close) uv += bars[j].volume;
            else if (bars[j].close < bars[j - 1].close) dv += bars[j].volume;
        }
        return uv + dv == 0.0 ? 0.0 : uv / (uv + dv);
    };

    for (int t = 0; t + 1 < cfg.n_days; ++t) {
        int g = -1;
        if (t >= kVrWindow) {
            const double z_vr = (vr10(static_cast<std::size_t>(t)) - kVrMean) / kVrStd;
            g = z_volume + z_vr >= 0.0 ? 1 : 0;
        }
        out.bayes.push_back(g);

        int up;
        if (g < 0) {
            up = rng.coin() ? 1 : 0;
        } else {
            const int signal = t < cfg.regime_shift_until ? 1 - g : g;
            up = rng.u01() < 1.0 - cfg.flip_prob ? signal : 1 - signal;
        }

        const auto& prev = bars.back();
        OhlcvBar bar;
        date = next_weekday(date, weekday);
        bar.date = date;

        const double magnitude = 0.004 + 0.006 * rng.u01();
        bar.close = prev.close * (up ? 1.0 + magnitude : 1.0 - magnitude);
        bar.open = prev.close * (1.0 + 0.002 * rng.gaussian());

        // symmetric wicks: bar geometry carries no second channel
        const double wick = 0.0035 * std::exp(0.25 * rng.gaussian());
        bar.high = std::max(bar.open, bar.close) * (1.0 + wick);
        bar.low = std::min(bar.open, bar.close) * (1.0 - wick);

        z_volume = rng.gaussian();
        bar.volume = std::floor(1e6 * std::exp(kVolumeSigma * z_volume));
        bars.push_back(bar);
    }
    return out;
}

}  // namespace enas::testing
