#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <random>

#include "swe/audio.hpp"
#include "swe/synth.hpp"

namespace {

std::string temp_wav_path() {
    static int counter = 0;
    return "swe_test_" + std::to_string(++counter) + ".wav";
}

// Minimal hand-rolled WAV writer so the decoder is tested against an
// independent byte layout, not its own save_wav.
std::string write_raw_wav(const std::vector<std::int16_t>& samples, int channels, int rate,
                          const char* magic = "RIFF") {
    std::string path = temp_wav_path();
    std::ofstream f(path, std::ios::binary);
    auto u32 = [&](std::uint32_t v) {
        char b[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
                     char((v >> 24) & 0xff)};
        f.write(b, 4);
    };
    auto u16 = [&](std::uint16_t v) {
        char b[2] = {char(v & 0xff), char((v >> 8) & 0xff)};
        f.write(b, 2);
    };
    const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
    f.write(magic, 4);
    u32(36 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    u32(16);
    u16(1);
    u16(static_cast<std::uint16_t>(channels));
    u32(static_cast<std::uint32_t>(rate));
    u32(static_cast<std::uint32_t>(rate * channels * 2));
    u16(static_cast<std::uint16_t>(channels * 2));
    u16(16);
    f.write("data", 4);
    u32(data_bytes);
    for (std::int16_t s : samples) u16(static_cast<std::uint16_t>(s));
    return path;
}

}  // namespace

TEST_CASE("16-bit mono decode normalizes by the type's maximum magnitude") {
    const auto path = write_raw_wav({32767}, 1, 16000);
    const auto buf = swe::load_wav(path);
    REQUIRE(buf.sample_rate == 16000);
    REQUIRE(buf.channels == 1);
    REQUIRE(buf.samples.size() == 1);
    CHECK(buf.samples[0] == Catch::Approx(0.99997).margin(1e-5));
    std::remove(path.c_str());
}

TEST_CASE("stereo decode keeps interleaving and channel count") {
    const auto path = write_raw_wav({100, -100, 200, -200}, 2, 44100);
    const auto buf = swe::load_wav(path);
    REQUIRE(buf.channels == 2);
    REQUIRE(buf.samples.size() == 4);
    CHECK(buf.samples[0] == Catch::Approx(100.0 / 32768.0));
    CHECK(buf.samples[1] == Catch::Approx(-100.0 / 32768.0));
    std::remove(path.c_str());
}

TEST_CASE("RIFX magic is rejected") {
    const auto path = write_raw_wav({0}, 1, 16000, "RIFX");
    CHECK_THROWS_WITH(swe::load_wav(path), Catch::Matchers::ContainsSubstring("RIFF"));
    std::remove(path.c_str());
}

TEST_CASE("to_mono averages channels and is idempotent") {
    swe::AudioBuffer stereo;
    stereo.sample_rate = 8000;
    stereo.channels = 2;

    SECTION("symmetric pair cancels") {
        stereo.samples = {0.5, -0.5};
        const auto mono = swe::to_mono(stereo);
        REQUIRE(mono.channels == 1);
        CHECK(mono.samples == std::vector<double>{0.0});
    }
    SECTION("hand-computed channel mean") {
        stereo.samples = {1.0, 0.0, 0.0, 1.0};
        CHECK(swe::to_mono(stereo).samples == std::vector<double>{0.5, 0.5});
    }
    SECTION("mono passes through unchanged and idempotently") {
        swe::AudioBuffer mono;
        mono.sample_rate = 8000;
        mono.channels = 1;
        mono.samples = {0.1, 0.2};
        const auto once = swe::to_mono(mono);
        CHECK(once.samples == mono.samples);
        CHECK(swe::to_mono(once).samples == once.samples);
    }
    SECTION("idempotence on random stereo") {
        std::mt19937 gen(42);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        stereo.samples.resize(2000);
        for (auto& s : stereo.samples) s = dist(gen);
        const auto once = swe::to_mono(stereo);
        CHECK(swe::to_mono(once).samples == once.samples);
    }
}

TEST_CASE("16-bit PCM round-trips within one quantization step") {
    auto buf = swe::synth::scenario("tone:120", 16000, 0.5);
    const std::string path = temp_wav_path();
    swe::save_wav(path, buf);
    const auto back = swe::load_wav(path);
    REQUIRE(back.samples.size() == buf.samples.size());
    for (std::size_t i = 0; i < buf.samples.size(); ++i)
        REQUIRE(std::abs(back.samples[i] - buf.samples[i]) <= 1.0 / 32768.0);
    std::remove(path.c_str());
}

TEST_CASE("chunk source replays the buffer in order") {
    auto buf = swe::synth::scenario("sine:100", 8000, 1.0);
    swe::BufferChunkSource src(buf, 100.0);
    std::vector<double> collected(buf.samples.size());
    std::vector<double> chunk(8000);
    std::size_t pos = 0;
    while (std::size_t n = src.read(chunk))
        for (std::size_t i = 0; i < n; ++i) collected[pos++] = chunk[i];
    CHECK(pos == buf.samples.size());
    CHECK(collected == buf.samples);
}
