#include <doctest.h>

#include <bit>
#include <random>

#include "cgp/truth_table.hpp"

using namespace cgp;

namespace {

std::uint64_t row_of(const std::string& msb_first)
{
    std::uint64_t j = 0;
    for (char c : msb_first) j = (j << 1) | static_cast<std::uint64_t>(c == '1');
    return j;
}

}  // namespace

TEST_CASE("parity tables")
{
    const auto p4 = parity_table(4);
    CHECK(p4.num_inputs() == 4);
    CHECK(p4.num_outputs() == 1);
    CHECK(p4.bit(0, row_of("1011")) == true);

    const auto p10 = parity_table(10);
    CHECK(p10.num_inputs() == 10);
    CHECK(p10.num_outputs() == 1);

    const auto p1 = parity_table(1);
    CHECK(p1.bit(0, 0) == false);
    CHECK(p1.bit(0, 1) == true);

    CHECK_THROWS_AS(parity_table(0), std::out_of_range);
    CHECK_THROWS_AS(parity_table(21), std::out_of_range);
}

TEST_CASE("adder tables")
{
    const auto a22 = adder_table(2, 2, false);
    CHECK(a22.num_inputs() == 4);
    CHECK(a22.num_outputs() == 3);
    // a=3 in the low variables, b=1 above it: sum 100
    const std::uint64_t j = 3 | (1 << 2);
    CHECK(a22.row_value(j) == 0b100);

    const auto a1010 = adder_table(10, 10, false);
    CHECK(a1010.num_inputs() == 20);
    CHECK(a1010.num_outputs() == 11);

    const auto a32c = adder_table(3, 2, true);
    CHECK(a32c.num_inputs() == 6);
    CHECK(a32c.num_outputs() == 4);
    CHECK(a32c.row_value(7 | (3 << 3) | (1 << 5)) == 11);

    CHECK_THROWS_AS(adder_table(10, 10, true), std::out_of_range);
    CHECK_THROWS_AS(adder_table(0, 3, false), std::out_of_range);
}

TEST_CASE("multiplier tables")
{
    const auto m22 = multiplier_table(2, 2);
    CHECK(m22.num_inputs() == 4);
    CHECK(m22.num_outputs() == 4);
    CHECK(m22.row_value(3 | (3 << 2)) == 0b1001);

    const auto m55 = multiplier_table(5, 5);
    CHECK(m55.num_inputs() == 10);
    CHECK(m55.num_outputs() == 10);
    CHECK_THROWS_AS(multiplier_table(11, 10), std::out_of_range);
}

TEST_CASE("generators agree with integer arithmetic on every row")
{
    for (std::size_t a = 1; a <= 8; ++a) {
        for (std::size_t b = 1; a + b <= 16; ++b) {
            const auto add = adder_table(a, b, false);
            const auto mul = multiplier_table(a, b);
            for (std::uint64_t j = 0; j < add.num_rows(); ++j) {
                const std::uint64_t x = j % (1ULL << a);
                const std::uint64_t y = j / (1ULL << a);
                REQUIRE(add.row_value(j) == x + y);
                REQUIRE(mul.row_value(j) == x * y);
            }
        }
    }
    for (std::size_t a = 1; a <= 7; ++a) {
        const auto addc = adder_table(a, a, true);
        for (std::uint64_t j = 0; j < addc.num_rows(); ++j) {
            const std::uint64_t x = j % (1ULL << a);
            const std::uint64_t y = (j >> a) % (1ULL << a);
            const std::uint64_t c = j >> (2 * a);
            REQUIRE(addc.row_value(j) == x + y + c);
        }
    }
    for (std::size_t n = 1; n <= 16; ++n) {
        const auto p = parity_table(n);
        for (std::uint64_t j = 0; j < p.num_rows(); ++j) {
            std::uint64_t ones = 0;
            for (std::uint64_t k = 0; k < n; ++k) ones += (j >> k) & 1U;
            REQUIRE(p.bit(0, j) == (ones % 2 == 1));
        }
    }
}

TEST_CASE("PLA format")
{
    CHECK(write_pla(parity_table(1)) == ".i 1\n.o 1\n0 0\n1 1\n");
    CHECK(read_pla(".i 1\n.o 1\n0 0\n1 1\n") == parity_table(1));

    SUBCASE("round trip on generated and random tables")
    {
        for (const auto& t : {adder_table(2, 2, false), multiplier_table(3, 2), parity_table(5)}) {
            const std::string text = write_pla(t);
            CHECK(read_pla(text) == t);
            CHECK(write_pla(read_pla(text)) == text);
        }
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t ni = 1 + rng() % 7;
            const std::size_t no = 1 + rng() % 5;
            const auto t = tabulate(ni, no, [&](std::uint64_t) { return rng(); });
            CHECK(read_pla(write_pla(t)) == t);
        }
    }

    SUBCASE("rows may come in any order")
    {
        CHECK(read_pla(".i 1\n.o 1\n1 1\n0 0\n") == parity_table(1));
    }

    SUBCASE("incomplete table is rejected")
    {
        std::string text = write_pla(parity_table(4));
        text = text.substr(0, text.rfind("1111"));
        CHECK_THROWS_AS(read_pla(text), ParseError);
    }

    SUBCASE("errors carry the line number")
    {
        try {
            read_pla(".i 2\n.o 1\n00 0\n01 1\n01 1\n11 0\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 5);
        }
        CHECK_THROWS_AS(read_pla(".i 2\n.o 1\n00 0\n0x 1\n10 1\n11 0\n"), ParseError);
        CHECK_THROWS_AS(read_pla(".i 2\n.o 1\n00 0\n011 1\n10 1\n11 0\n"), ParseError);
        CHECK_THROWS_AS(read_pla(".i 2\n.o 1\n00 0\n01 10\n10 1\n11 0\n"), ParseError);
        CHECK_THROWS_AS(read_pla(".o 1\n0 0\n1 1\n"), ParseError);
        CHECK_THROWS_AS(read_pla(".i 21\n.o 1\n"), ParseError);
    }
}

TEST_CASE("reference gate counts")
{
    CHECK(reference_gate_count(BenchmarkKind::Adder, 2) == 7);
    CHECK(reference_gate_count(BenchmarkKind::Adder, 4) == 17);
    CHECK(reference_gate_count(BenchmarkKind::Adder, 10) == 47);
    CHECK(reference_gate_count(BenchmarkKind::Multiplier, 2) == 11);
    CHECK(reference_gate_count(BenchmarkKind::Multiplier, 3) == 33);
    CHECK(reference_gate_count(BenchmarkKind::Multiplier, 5) == 113);
    CHECK(reference_gate_count(BenchmarkKind::Parity, 5) == 12);
    CHECK(reference_gate_count(BenchmarkKind::Parity, 10) == 27);
    CHECK_FALSE(reference_gate_count(BenchmarkKind::Parity, 11).has_value());
}
