#include <catch2/catch_amalgamated.hpp>

#include "swe/formants.hpp"
#include "swe/pipeline.hpp"
#include "swe/synth.hpp"

using swe::AnalysisConfig;

namespace {

constexpr int kRate = 44100;

// 5 s window with a vowel of the given length centered after 1 s, over a
// low noise floor so the adaptive energy baseline initializes on silence.
swe::AudioWindow vowel_window(double vowel_s, double f1, double f2, std::uint64_t seed = 9) {
    swe::AudioWindow w;
    w.sample_rate = kRate;
    w.samples = swe::synth::white_noise(5 * kRate, 1e-4, seed);
    swe::synth::overlay(w.samples,
                        swe::synth::vowel(static_cast<std::int64_t>(vowel_s * kRate), kRate,
                                          120.0, f1, f2, 0.4),
                        kRate);
    return w;
}

struct Analyzed {
    swe::FormantTrack formants;
    swe::VadResult vad;
    swe::FrameTrack pitch;
};

Analyzed analyze(const swe::AudioWindow& w) {
    AnalysisConfig cfg;
    const auto rms = swe::frame_rms(w, cfg);
    const auto energy = swe::frame_energy(w, cfg);
    const auto zcr = swe::frame_zcr(w, cfg);
    Analyzed a;
    a.pitch = swe::pitch_track(w, rms, cfg);
    a.vad = swe::detect_voice_activity(energy, zcr, a.pitch);
    a.formants = swe::formant_track(w, a.pitch, cfg);
    return a;
}

}  // namespace

TEST_CASE("two-resonance vowel is tracked near its formants") {
    const auto w = vowel_window(0.5, 400.0, 900.0);
    const auto a = analyze(w);
    int voiced = 0, good = 0;
    for (std::size_t i = 0; i < a.formants.values.size(); ++i) {
        if (a.pitch.values[i] == 0.0) continue;
        ++voiced;
        const auto& f = a.formants.values[i];
        if (std::abs(f[0] - 400.0) <= 50.0 && std::abs(f[1] - 900.0) <= 75.0) ++good;
    }
    REQUIRE(voiced > 0);
    CHECK(static_cast<double>(good) >= 0.8 * voiced);
}

TEST_CASE("silence and unvoiced noise give (0,0) formants") {
    AnalysisConfig cfg;
    SECTION("silence") {
        swe::AudioWindow w;
        w.sample_rate = kRate;
        w.samples.assign(5 * kRate, 0.0);
        const auto a = analyze(w);
        for (const auto& f : a.formants.values) {
            REQUIRE(f[0] == 0.0);
            REQUIRE(f[1] == 0.0);
        }
    }
    SECTION("white noise with an unvoiced pitch track") {
        swe::AudioWindow w;
        w.sample_rate = kRate;
        w.samples = swe::synth::white_noise(5 * kRate, 0.3, 13);
        const auto rms = swe::frame_rms(w, cfg);
        const auto pitch = swe::pitch_track(w, rms, cfg);
        const auto ft = swe::formant_track(w, pitch, cfg);
        for (std::size_t i = 0; i < ft.values.size(); ++i) {
            if (pitch.values[i] == 0.0) {
                REQUIRE(ft.values[i][0] == 0.0);
                REQUIRE(ft.values[i][1] == 0.0);
            }
        }
    }
}

TEST_CASE("voiced frames keep F1 < F2") {
    const auto a = analyze(vowel_window(0.5, 450.0, 1100.0));
    for (const auto& f : a.formants.values)
        if (f[0] != 0.0) REQUIRE(f[0] < f[1]);
}

TEST_CASE("filler detection: duration and vowel-region predicates") {
    AnalysisConfig cfg;

    SECTION("400 ms steady back vowel is one filler") {
        const auto a = analyze(vowel_window(0.4, 450.0, 1000.0));
        const auto res = swe::detect_fillers(a.formants, a.vad, cfg);
        CHECK(res.count == 1);
    }
    SECTION("180 ms vowel is too short") {
        const auto a = analyze(vowel_window(0.18, 450.0, 1000.0));
        const auto res = swe::detect_fillers(a.formants, a.vad, cfg);
        CHECK(res.count == 0);
    }
    SECTION("front vowel (F2 = 2200 Hz) is rejected") {
        const auto a = analyze(vowel_window(0.4, 350.0, 2200.0));
        const auto res = swe::detect_fillers(a.formants, a.vad, cfg);
        CHECK(res.count == 0);
    }
}

TEST_CASE("filler count never exceeds voiced-segment count") {
    const auto a = analyze(vowel_window(0.4, 450.0, 1000.0));
    int segments = 0;
    bool in_run = false;
    for (double f : a.vad.flags.values) {
        if (f != 0.0 && !in_run) ++segments;
        in_run = f != 0.0;
    }
    const auto res = swe::detect_fillers(a.formants, a.vad, AnalysisConfig{});
    CHECK(res.count <= segments);
    for (const auto& [s, e] : res.segments)
        CHECK((e - s) * 10.0 >= 250.0);  // each segment at least 250 ms
}

TEST_CASE("documented false positive: run-together back-vowel syllables") {
    // Several identical back-vowel syllables concatenated without glottal
    // stops form one long stable voiced segment and are (incorrectly, by
    // construction) reported as a filler. This behavior is documented, not
    // fixed.
    swe::AudioWindow w;
    w.sample_rate = kRate;
    w.samples = swe::synth::white_noise(5 * kRate, 1e-4, 29);
    const auto syllable =
        swe::synth::vowel(static_cast<std::int64_t>(0.15 * kRate), kRate, 120.0, 450.0,
                          1000.0, 0.4);
    for (int k = 0; k < 4; ++k)  // back to back, no pause
        swe::synth::overlay(w.samples, syllable,
                            kRate + k * static_cast<std::int64_t>(0.15 * kRate));
    const auto a = analyze(w);
    const auto res = swe::detect_fillers(a.formants, a.vad, AnalysisConfig{});
    CHECK(res.count >= 1);
}
