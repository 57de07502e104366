#include <gtest/gtest.h>

#include <cmath>

#include "hypergeo/io.hpp"
#include "hypergeo/rng.hpp"

using namespace hypergeo;

TEST(Io, ComplexLiterals) {
    EXPECT_EQ(io::parse_complex("2"), cplx(2, 0));
    EXPECT_EQ(io::parse_complex("1.5-2i"), cplx(1.5, -2));
    EXPECT_EQ(io::parse_complex("-3i"), cplx(0, -3));
    EXPECT_EQ(io::parse_complex("i"), cplx(0, 1));
    EXPECT_EQ(io::parse_complex("-i"), cplx(0, -1));
    EXPECT_EQ(io::parse_complex("1e-3+2e+1i"), cplx(1e-3, 20));
    EXPECT_THROW(io::parse_complex("1+"), domain_error);
    EXPECT_THROW(io::parse_complex("abc"), domain_error);
    EXPECT_THROW(io::parse_complex(""), domain_error);
}

TEST(Io, ListsAndGrids) {
    EXPECT_EQ(io::parse_real_list("0:2:5"), (std::vector<double>{0, 0.5, 1, 1.5, 2}));
    EXPECT_EQ(io::parse_real_list("1,2.5"), (std::vector<double>{1, 2.5}));
    EXPECT_THROW(io::parse_real_list("0:1"), domain_error);
    EXPECT_THROW(io::parse_real_list("0:1:0"), domain_error);
    EXPECT_EQ(io::parse_complex_list("1+i,2").size(), 2u);
}

TEST(Io, SeventeenDigitsRoundTrip) {
    RngStream rng(1, 0);
    for (int i = 0; i < 1000; ++i) {
        const cplx z(rng.normal() * std::pow(10.0, int(rng.uniform() * 20) - 10), rng.normal());
        EXPECT_EQ(io::parse_complex(io::fmt(z)), z);
        const double x = rng.normal() * 1e-300;
        EXPECT_EQ(io::parse_double(io::fmt(x)), x);
    }
    EXPECT_EQ(io::fmt(cplx(1, -0.0)), "1-0i");
}
