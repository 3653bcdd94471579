#include "memspike/spike_codec.hpp"

#include <gtest/gtest.h>

#include "memspike/rng.hpp"

using namespace memspike;

namespace {

BinaryImage random_image(int w, int h, SplitMix64& rng) {
    BinaryImage img = make_image(w, h);
    for (auto& p : img.pixels) p = rng.next_unit() < 0.5 ? Pixel::Black : Pixel::White;
    return img;
}

}  // namespace

TEST(Timing, DefaultsAndDerivedUnits) {
    TimingConfig t;
    EXPECT_NO_THROW(validate(t));
    EXPECT_DOUBLE_EQ(t.tick_us(), 0.004);
    EXPECT_DOUBLE_EQ(t.slot_us(), 4.0);
    EXPECT_EQ(t.t_black_tick, 0);
    EXPECT_EQ(t.t_white_tick, 500);
}

TEST(Timing, RejectsDegenerateAxes) {
    TimingConfig t;
    t.tick_ns = 0.0;
    EXPECT_THROW(validate(t), std::invalid_argument);
    t = {};
    t.slot_ticks = 0;
    EXPECT_THROW(validate(t), std::invalid_argument);
    t = {};
    t.t_white_tick = t.t_black_tick;  // volleys must be ordered
    EXPECT_THROW(validate(t), std::invalid_argument);
    t = {};
    t.t_white_tick = t.slot_ticks;  // and inside the slot
    EXPECT_THROW(validate(t), std::invalid_argument);
}

TEST(Encode, SplitsPixelsIntoTwoVolleys) {
    auto img = make_image(3, 1);
    img.at(0, 0) = Pixel::Black;
    img.at(2, 0) = Pixel::Black;
    const auto sched = encode(img, TimingConfig{});
    ASSERT_EQ(sched.events.size(), 2u);
    const auto& black = sched.events[0];
    const auto& white = sched.events[1];
    EXPECT_EQ(black.kind, SpikeKind::BlackVolley);
    EXPECT_EQ(black.tick, 0);
    EXPECT_EQ(black.sources, (std::vector<int>{0, 2}));
    EXPECT_EQ(white.kind, SpikeKind::WhiteVolley);
    EXPECT_EQ(white.tick, 500);
    EXPECT_EQ(white.sources, (std::vector<int>{1}));
}

TEST(Encode, EmptyVolleysStillScheduled) {
    const auto all_white = make_image(2, 2);
    const auto sched = encode(all_white, TimingConfig{});
    ASSERT_EQ(sched.events.size(), 2u);
    EXPECT_TRUE(sched.events[0].sources.empty());
    EXPECT_EQ(sched.events[1].sources.size(), 4u);
}

TEST(ImageText, RoundTripsRandomImages) {
    SplitMix64 rng{23};
    for (int i = 0; i < 100; ++i) {
        const int w = 1 + static_cast<int>(rng.next_below(12));
        const int h = 1 + static_cast<int>(rng.next_below(12));
        const auto img = random_image(w, h, rng);
        EXPECT_EQ(parse_image(serialize_image(img)), img);
    }
}

TEST(ImageText, AcceptsInteriorWhitespaceAndBlankLines) {
    const auto img = parse_image("3 3\n1 1 1\n\n0\t1 0\n111\n");
    EXPECT_EQ(img.width, 3);
    EXPECT_EQ(img.black_count(), 7);
    EXPECT_EQ(img.at(1, 1), Pixel::Black);
    EXPECT_EQ(img.at(0, 1), Pixel::White);
}

TEST(ImageText, ErrorsCarryLineNumbers) {
    const auto expect_line = [](std::string_view text, int line, std::string_view needle) {
        try {
            parse_image(text);
            FAIL() << "expected a parse error for: " << text;
        } catch (const ImageParseError& e) {
            EXPECT_EQ(e.line, line) << e.what();
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    expect_line("", 1, "empty");
    expect_line("banana\n11\n", 1, "header");
    expect_line("2 2\n11\n1\n", 3, "expected 2");
    expect_line("2 2\n11\n1x\n", 3, "invalid character 'x'");
    expect_line("2 2\n11\n11\n00\n", 4, "more rows");
    expect_line("2 2\n11\n", 3, "found 1 rows");
    expect_line("2 2\n11\n00", 3, "missing trailing newline");
    expect_line("0 2\n\n", 1, "positive");
}

TEST(FlipNoise, FlipsExactlyTheRequestedCount) {
    SplitMix64 rng{29};
    for (int trial = 0; trial < 50; ++trial) {
        const auto img = random_image(9, 9, rng);
        const int k = static_cast<int>(rng.next_below(82));
        const auto noisy = flip_noise(img, k, rng.next());
        int differing = 0;
        for (size_t i = 0; i < img.pixels.size(); ++i)
            differing += img.pixels[i] != noisy.pixels[i];
        EXPECT_EQ(differing, k);
    }
}

TEST(FlipNoise, SeedDeterminesTheOutcome) {
    SplitMix64 rng{31};
    const auto img = random_image(5, 5, rng);
    EXPECT_EQ(flip_noise(img, 4, 99), flip_noise(img, 4, 99));
    // different seeds should pick different flip sets essentially always;
    // check a handful rather than asserting a probabilistic statement
    int distinct = 0;
    for (uint64_t s = 0; s < 8; ++s)
        distinct += !(flip_noise(img, 4, s) == flip_noise(img, 4, s + 100));
    EXPECT_GT(distinct, 0);
}

TEST(FlipNoise, RejectsImpossibleCounts) {
    const auto img = make_image(2, 2);
    EXPECT_THROW(flip_noise(img, -1, 0), std::invalid_argument);
    EXPECT_THROW(flip_noise(img, 5, 0), std::invalid_argument);
    EXPECT_EQ(flip_noise(img, 4, 0).black_count(), 4);  // full flip is fine
}

TEST(SeedDerivation, StableAndLabelSeparated) {
    // pinned splitmix64 vector so a refactor cannot silently change streams
    SplitMix64 r0{0};
    EXPECT_EQ(r0.next(), 0xe220a8397b1dcdafull);
    EXPECT_EQ(r0.next(), 0x6e789e6aa1b965f4ull);
    EXPECT_EQ(r0.next(), 0x06c45d188009454full);
    SplitMix64 r42{42};
    EXPECT_EQ(r42.next(), 0xbdd732262feb6e95ull);

    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
    EXPECT_EQ(fnv1a("abc"), 0xe71fa2190541574bull);

    EXPECT_EQ(derive_seed(1, "test-noise", 0), derive_seed(1, "test-noise", 0));
    EXPECT_NE(derive_seed(1, "test-noise", 0), derive_seed(1, "test-noise", 1));
    EXPECT_NE(derive_seed(1, "test-noise", 0), derive_seed(1, "other", 0));
    EXPECT_NE(derive_seed(1, "test-noise", 0), derive_seed(2, "test-noise", 0));
}
