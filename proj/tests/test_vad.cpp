#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "swe/features.hpp"
#include "swe/pitch.hpp"
#include "swe/synth.hpp"
#include "swe/vad.hpp"

using swe::AnalysisConfig;
using swe::FrameTrack;
using swe::VadParams;

namespace {

FrameTrack make_track(std::vector<double> v, swe::TrackKind kind) {
    FrameTrack t{std::move(v), kind, 10.0, 50.0};
    return t;
}

// Straight-line reference fold of the detection loop, kept deliberately
// naive and separate from the library implementation.
std::vector<double> reference_vad_flags(const std::vector<double>& energy,
                                        const std::vector<double>& zcr,
                                        const std::vector<double>& pitch,
                                        const VadParams& p) {
    const std::size_t n = energy.size();
    double min_energy = 0.0;
    const std::size_t init = std::min<std::size_t>(p.init_span, n);
    for (std::size_t i = 0; i < init; ++i) min_energy += energy[i];
    min_energy /= static_cast<double>(init);
    if (min_energy <= 0.0) min_energy = p.energy_floor;
    double threshold = p.primary_threshold * std::log(min_energy);
    double silence = 0.0;

    std::vector<double> flags(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        bool pitched = false;
        for (std::size_t j = i >= 8 ? i - 8 : 0; j <= std::min(n - 1, i + 8); ++j)
            if (pitch[j] != 0.0) pitched = true;
        if (energy[i] > threshold && zcr[i] > p.zcr_min && zcr[i] < p.zcr_max && pitched) {
            flags[i] = 1.0;
        } else {
            silence += 1.0;
            min_energy = (silence * min_energy + energy[i]) / (silence + 1.0);
            if (min_energy <= 0.0) min_energy = p.energy_floor;
            threshold = p.primary_threshold * std::log(min_energy);
        }
    }
    // remove runs of 1s shorter than min_run
    std::size_t i = 0;
    while (i < n) {
        if (flags[i] == 0.0) { ++i; continue; }
        std::size_t j = i;
        while (j < n && flags[j] != 0.0) ++j;
        if (j - i < static_cast<std::size_t>(p.min_run))
            std::fill(flags.begin() + i, flags.begin() + j, 0.0);
        i = j;
    }
    return flags;
}

}  // namespace

TEST_CASE("digital silence produces no voice activity") {
    const auto energy = make_track(std::vector<double>(200, 0.0), swe::TrackKind::energy);
    const auto zcr = make_track(std::vector<double>(200, 0.0), swe::TrackKind::zcr);
    const auto pitch = make_track(std::vector<double>(200, 0.0), swe::TrackKind::pitch_hz);
    const auto res = swe::detect_voice_activity(energy, zcr, pitch);
    CHECK(res.mean == 0.0);
    CHECK(res.degenerate_silence);
    for (double f : res.flags.values) REQUIRE(f == 0.0);
}

TEST_CASE("half-voiced synthetic window detects occupancy near 0.5") {
    // 2.5 s of voiced speech centered in a 5 s window, low noise elsewhere
    AnalysisConfig cfg;
    const int rate = 16000;
    swe::AudioWindow w;
    w.sample_rate = rate;
    w.samples = swe::synth::white_noise(5 * rate, 1e-4, 21);
    swe::synth::overlay(w.samples, swe::synth::voiced_tone(rate * 5 / 2, rate, 120.0, 0.4),
                        rate * 5 / 4);

    const auto rms = swe::frame_rms(w, cfg);
    const auto energy = swe::frame_energy(w, cfg);
    const auto zcr = swe::frame_zcr(w, cfg);
    const auto pitch = swe::pitch_track(w, rms, cfg);
    const auto res = swe::detect_voice_activity(energy, zcr, pitch);
    CHECK(res.mean > 0.4);
    CHECK(res.mean < 0.6);
}

TEST_CASE("isolated bursts shorter than 10 frames are pruned") {
    std::vector<double> energy(100, 1e-9), zcr(100, 0.0), pitch(100, 0.0);
    for (int i = 40; i < 45; ++i) {  // 5-frame burst passing every threshold
        energy[i] = 10.0;
        zcr[i] = 0.02;
        pitch[i] = 150.0;
    }
    const auto res = swe::detect_voice_activity(make_track(energy, swe::TrackKind::energy),
                                                make_track(zcr, swe::TrackKind::zcr),
                                                make_track(pitch, swe::TrackKind::pitch_hz));
    for (double f : res.flags.values) REQUIRE(f == 0.0);

    // the same burst at 12 frames survives
    for (int i = 40; i < 52; ++i) {
        energy[i] = 10.0;
        zcr[i] = 0.02;
        pitch[i] = 150.0;
    }
    const auto res2 = swe::detect_voice_activity(make_track(energy, swe::TrackKind::energy),
                                                 make_track(zcr, swe::TrackKind::zcr),
                                                 make_track(pitch, swe::TrackKind::pitch_hz));
    CHECK(res2.mean > 0.0);
}

TEST_CASE("zeroing the pitch track forces all flags to zero") {
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> e_dist(0.0, 20.0), z_dist(0.0, 0.06);
    std::vector<double> energy(300), zcr(300), pitch(300, 0.0);
    for (std::size_t i = 0; i < energy.size(); ++i) {
        energy[i] = e_dist(gen);
        zcr[i] = z_dist(gen);
    }
    const auto res = swe::detect_voice_activity(make_track(energy, swe::TrackKind::energy),
                                                make_track(zcr, swe::TrackKind::zcr),
                                                make_track(pitch, swe::TrackKind::pitch_hz));
    CHECK(res.mean == 0.0);
}

TEST_CASE("flags match the brute-force reference exactly on random tracks") {
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> e_dist(0.0, 5.0), z_dist(0.0, 0.08);
    std::uniform_int_distribution<int> coin(0, 3);
    VadParams p;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 50 + trial * 7;
        std::vector<double> energy(n), zcr(n), pitch(n);
        for (std::size_t i = 0; i < n; ++i) {
            energy[i] = e_dist(gen);
            zcr[i] = z_dist(gen);
            pitch[i] = coin(gen) == 0 ? 120.0 : 0.0;
        }
        const auto res = swe::detect_voice_activity(make_track(energy, swe::TrackKind::energy),
                                                    make_track(zcr, swe::TrackKind::zcr),
                                                    make_track(pitch, swe::TrackKind::pitch_hz),
                                                    p);
        const auto ref = reference_vad_flags(energy, zcr, pitch, p);
        REQUIRE(res.flags.values == ref);
        // summary invariants
        REQUIRE(res.mean >= 0.0);
        REQUIRE(res.mean <= 1.0);
        REQUIRE(res.std_dev >= 0.0);
        REQUIRE(res.std_dev <= 0.5);
    }
}

TEST_CASE("min_energy fold equals the running mean over consecutive silence") {
    // All-silent input: after k frames, min_energy must equal the mean of the
    // initialization value and the first k energies. Verified through the
    // threshold visible in behavior: feed constant energy below threshold.
    VadParams p;
    const std::size_t n = 60;
    std::vector<double> energy(n), zcr(n, 0.5), pitch(n, 0.0);  // zcr out of band: all silent
    std::mt19937 gen(23);
    std::uniform_real_distribution<double> e_dist(0.1, 2.0);
    for (auto& e : energy) e = e_dist(gen);

    // reference fold
    double min_e = 0.0;
    for (int i = 0; i < p.init_span; ++i) min_e += energy[i];
    min_e /= p.init_span;
    const double init = min_e;
    for (std::size_t k = 1; k <= n; ++k) {
        min_e = (static_cast<double>(k) * min_e + energy[k - 1]) / static_cast<double>(k + 1);
        // closed form: running mean of init and the k energies seen so far
        double mean = init;
        for (std::size_t i = 0; i < k; ++i) mean += energy[i];
        mean /= static_cast<double>(k + 1);
        REQUIRE(min_e == Catch::Approx(mean).epsilon(1e-12));
    }
    // and the implementation agrees with the same fold (flags identical)
    const auto res = swe::detect_voice_activity(make_track(energy, swe::TrackKind::energy),
                                                make_track(zcr, swe::TrackKind::zcr),
                                                make_track(pitch, swe::TrackKind::pitch_hz), p);
    CHECK(res.mean == 0.0);
}

TEST_CASE("run pruning never increases the number of set flags") {
    std::mt19937 gen(31);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> v(120);
        for (auto& x : v) x = coin(gen);
        const auto before = std::count(v.begin(), v.end(), 1.0);
        swe::detail::prune_short_runs(v, 10);
        REQUIRE(std::count(v.begin(), v.end(), 1.0) <= before);
    }
}

TEST_CASE("empty tracks are rejected") {
    FrameTrack empty = make_track({}, swe::TrackKind::energy);
    CHECK_THROWS(swe::detect_voice_activity(empty, empty, empty));
}
