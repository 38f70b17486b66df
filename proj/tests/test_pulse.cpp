#include "support.hpp"
#include "thzcoh/pulse.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace thzcoh;

TEST(PulseArea, PiPulse)
{
    const PulseSpec p{PulseShape::gaussian, std::sqrt(constants::pi) / 4.0 / 1e-12, 1e-12, 0.0, 0.0};
    EXPECT_NEAR(pulse_area(p), constants::pi, 1e-12);
}

TEST(PulseArea, ZeroDrive)
{
    EXPECT_EQ(pulse_area(PulseSpec{PulseShape::gaussian, 0.0, 1e-12, 0.0, 0.0}), 0.0);
}

TEST(PulseArea, HundredFemtosecondPulse)
{
    const PulseSpec p{PulseShape::gaussian, 2e11, 100e-15, 0.0, 0.0};
    EXPECT_NEAR(pulse_area(p), 0.1418, 1e-4);
}

TEST(PulseArea, GaussianClosedFormOverRandomPulses)
{
    fixture::Draw draw(3);
    for (int i = 0; i < 100; ++i) {
        const double width = draw.log_uniform(1e-14, 1e-9);
        const double rabi = draw.log_uniform(1e8, 1e13);
        const PulseSpec p{PulseShape::gaussian, rabi, width, draw.uniform(-1e-9, 1e-9), 0.0};
        const double exact = 4.0 * std::sqrt(constants::pi) * rabi * width;
        EXPECT_NEAR(pulse_area(p) / exact, 1.0, 1e-8);
    }
}

TEST(PulseArea, FlatTop)
{
    const PulseSpec p{PulseShape::flat_top, 1e11, 2e-12, 0.0, 0.0};
    EXPECT_NEAR(pulse_area(p), 2.0 * std::numbers::sqrt2 * 1e11 * 4e-12, 1e-12);
    EXPECT_NEAR(flat_top_rabi_for_area(pulse_area(p), 2e-12), 1e11, 1e-3);
}

TEST(PulseArea, InverseForGaussian)
{
    EXPECT_NEAR(gaussian_rabi_for_area(constants::pi, 1e-12) * 1e-12, std::sqrt(constants::pi) / 4.0, 1e-15);
    EXPECT_THROW(gaussian_rabi_for_area(-1.0, 1e-12), ValidationError);
}

TEST(PulseSpec, TruncationWindow)
{
    const PulseSpec p{PulseShape::gaussian, 1e11, 1e-12, 0.0, 0.0};
    EXPECT_LT(p.envelope(p.window_end()), 1e-21 * p.peak_rabi);
    EXPECT_LT(p.envelope(p.window_start()), 1e-21 * p.peak_rabi);
    EXPECT_DOUBLE_EQ(p.envelope(0.0), 1e11);
}

TEST(PulseSpec, CumulativeIntegralEndsAtTotal)
{
    const PulseSpec p{PulseShape::gaussian, 1e11, 1e-12, 3e-12, 0.0};
    EXPECT_NEAR(p.cumulative_integral(1.0) * 2.0 * std::numbers::sqrt2 / pulse_area(p), 1.0, 1e-12);
    EXPECT_NEAR(p.cumulative_integral(3e-12), 0.5 * p.cumulative_integral(1.0), 1e-9);
}

TEST(PulseSpec, Validation)
{
    EXPECT_THROW((PulseSpec{PulseShape::gaussian, -1.0, 1e-12, 0.0, 0.0}.validate()), ValidationError);
    EXPECT_THROW((PulseSpec{PulseShape::gaussian, 1.0, 0.0, 0.0, 0.0}.validate()), ValidationError);
    EXPECT_THROW(parse_pulse_shape("sech"), ValidationError);
    EXPECT_EQ(parse_pulse_shape("flat_top"), PulseShape::flat_top);
}
