#include <doctest.h>

#include <cmath>

#include "dmn/compensated_sum.hpp"
#include "dmn/format.hpp"
#include "dmn/types.hpp"

using namespace dmn;

TEST_CASE("CountVector keeps an exact total") {
    const CountVector x{3, 0, 7};
    CHECK(x.size() == 3);
    CHECK(x.total() == 10);
    CHECK(x.scaled(4) == CountVector{12, 0, 28});
    CHECK(x.scaled(0).total() == 0);
}

TEST_CASE("CountVector rejects bad input") {
    CHECK_THROWS_AS(CountVector(std::vector<Count>{}), DimensionError);
    CHECK_THROWS_AS((CountVector{1, -1}), DomainError);
    CHECK_THROWS_AS((CountVector{std::numeric_limits<Count>::max(), 1}), ResourceError);
    CHECK_THROWS_AS((CountVector{1}.scaled(-1)), DomainError);
}

TEST_CASE("AlphaParams validation and cached sum") {
    const AlphaParams a{0.5, 2.0, 3.0};
    CHECK(a.sum() == 5.5);
    CHECK(a.sum_residual() == 0.0);

    CHECK_THROWS_AS(AlphaParams(std::vector<double>{}), DimensionError);
    CHECK_THROWS_AS((AlphaParams{1.0, 0.0}), DomainError);
    CHECK_THROWS_AS((AlphaParams{1.0, -2.0}), DomainError);
    CHECK_THROWS_AS((AlphaParams{1.0, INFINITY}), DomainError);
    CHECK_THROWS_AS((AlphaParams{NAN}), DomainError);
}

TEST_CASE("AlphaParams sum carries what a double cannot") {
    // 1 + 2^-60 is not representable; the pair (sum, residual) keeps it.
    const double tiny = std::ldexp(1.0, -60);
    const AlphaParams a{1.0, tiny};
    CHECK(a.sum() == 1.0);
    CHECK(a.sum_residual() == tiny);

    // Order of supply does not matter.
    const AlphaParams b{tiny, 1.0};
    CHECK(b.sum() == a.sum());
    CHECK(b.sum_residual() == a.sum_residual());
}

TEST_CASE("MeanPhiParams simplex tolerance and renormalization") {
    CHECK_NOTHROW(MeanPhiParams({0.25, 0.75}, 0.0));
    CHECK_NOTHROW(MeanPhiParams({0.1, 0.2, 0.3, 0.4}, 0.005));
    CHECK_NOTHROW(MeanPhiParams({0.5, 0.5 + 5e-13}, 0.1));
    CHECK_THROWS_AS(MeanPhiParams({0.5, 0.5 + 1e-9}, 0.1), DomainError);
    CHECK_THROWS_AS(MeanPhiParams({0.5, 0.6}, 0.1), DomainError);
    CHECK_THROWS_AS(MeanPhiParams({1.5, -0.5}, 0.1), DomainError);

    const MeanPhiParams r({1.0, 3.0}, 0.2, /*renormalize=*/true);
    CHECK(r.p()[0] == 0.25);
    CHECK(r.p()[1] == 0.75);
    CHECK_THROWS_AS(MeanPhiParams({0.0, 0.0}, 0.2, true), DomainError);
}

TEST_CASE("MeanPhiParams phi range is [0, 1)") {
    CHECK_NOTHROW(MeanPhiParams({1.0}, 0.0));
    CHECK_THROWS_AS(MeanPhiParams({1.0}, 1.0), DomainError);
    CHECK_THROWS_AS(MeanPhiParams({1.0}, -1e-300), DomainError);
    CHECK_THROWS_AS(MeanPhiParams({1.0}, NAN), DomainError);
    CHECK_THROWS_AS(MeanPhiParams({}, 0.5), DimensionError);
}

TEST_CASE("two_sum is error free") {
    const TwoSum s = two_sum(1.0, std::ldexp(1.0, -70));
    CHECK(s.sum == 1.0);
    CHECK(s.err == std::ldexp(1.0, -70));
}

TEST_CASE("Neumaier summation recovers cancelled low-order parts") {
    NeumaierSum acc;
    acc.add(1.0);
    acc.add(1e100);
    acc.add(1.0);
    acc.add(-1e100);
    CHECK(acc.result() == 2.0);

    NeumaierSum a;
    NeumaierSum b;
    for (int i = 1; i < 100; ++i) {
        a.add(std::log(i));
        b.add(std::log(i));
    }
    CHECK(difference(a, b) == 0.0);
}

TEST_CASE("format_number is shortest round trip") {
    CHECK(format_number(-1.791759469228055) == "-1.791759469228055");
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1e-14) == "1e-14");
    CHECK(format_number(kNegInf) == "-inf");
}
