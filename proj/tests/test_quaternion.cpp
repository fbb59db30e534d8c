#include <doctest.h>

#include "yma/quaternion.hpp"
#include "yma/rng.hpp"

using namespace yma;

namespace {
bool close(const Quat& a, const Quat& b, double tol = 1e-14) { return norm(a - b) <= tol; }
bool close(const ImQ& a, const ImQ& b, double tol = 1e-14) { return norm(a - b) <= tol; }
} // namespace

TEST_CASE("hamilton product table")
{
    Quat i(0, 1, 0, 0), j(0, 0, 1, 0), k(0, 0, 0, 1);
    CHECK(close(i * j, k));
    CHECK(close(j * k, i));
    CHECK(close(k * i, j));
    CHECK(close(i * i, Quat(-1.0)));
    Quat q(0.3, -1.2, 2.0, 0.7);
    CHECK(close(q * Quat(1.0), q));
    CHECK(close(Quat(1, 1, 0, 0) * Quat(1, 0, 1, 0), Quat(1, 1, 1, 1)));
}

TEST_CASE("imaginary part")
{
    CHECK(close(im_part(Quat(3, 2, 0, 0)), ImQ{2, 0, 0}));
    CHECK(close(im_part(Quat(5.0)), ImQ{}));
    CHECK(close(im_part(Quat(0, 1, 1, 1)), ImQ{1, 1, 1}));
}

TEST_CASE("bracket")
{
    ImQ i{1, 0, 0}, j{0, 1, 0}, k{0, 0, 1};
    CHECK(close(bracket(i, j), 2.0 * k));
    CHECK(close(bracket(i + j, k), 2.0 * i - 2.0 * j));
    ImQ a{0.4, -0.1, 2.2};
    CHECK(close(bracket(a, a), ImQ{}));
    // agrees with ab - ba computed in H
    ImQ b{1.5, 0.25, -0.75};
    CHECK(close(bracket(a, b), im_part(Quat(a) * Quat(b) - Quat(b) * Quat(a))));
}

TEST_CASE("bracket invariants on random samples")
{
    Rng rng(11);
    for (int n = 0; n < 1000; ++n) {
        ImQ a = rng.imq(), b = rng.imq();
        ImQ c = bracket(a, b);
        CHECK(std::fabs(dot(c, a)) <= 1e-12 * (1 + norm2(a) * norm(b)));
        CHECK(std::fabs(dot(c, b)) <= 1e-12 * (1 + norm2(b) * norm(a)));
        CHECK(norm(c) <= 2 * norm(a) * norm(b) * (1 + 1e-14));
    }
    ImQ a{1, 0, 0}, b{0, 3, 0};
    CHECK(std::fabs(norm(bracket(a, b)) - 2 * norm(a) * norm(b)) < 1e-14);
}

TEST_CASE("norm is multiplicative and conj is an involution")
{
    Rng rng(12);
    for (int n = 0; n < 100; ++n) {
        Quat p = rng.quat(), q = rng.quat();
        CHECK(std::fabs(norm2(p * q) - norm2(p) * norm2(q)) <= 1e-12 * norm2(p) * norm2(q));
        CHECK(close(conj(conj(p)), p));
        CHECK(close(p * (q * p), (p * q) * p, 1e-12 * (1 + norm2(p) * norm(q))));
    }
}

TEST_CASE("exponential of imaginary quaternions")
{
    CHECK(close(exp_im(ImQ{}), Quat(1.0)));
    CHECK(close(exp_im(ImQ{M_PI / 2, 0, 0}), Quat(0, 1, 0, 0)));
    Rng rng(13);
    for (int n = 0; n < 200; ++n) {
        ImQ s = rng.imq(3.0);
        if (norm(s) > 10) continue;
        CHECK(std::fabs(norm2(exp_im(s)) - 1.0) <= 1e-12);
        CHECK(close(exp_im(s) * exp_im(-s), Quat(1.0), 1e-12));
    }
    ImQ s{0.3, -0.2, 0.5};
    CHECK(close(log_unit(exp_im(s)), s, 1e-14));
}
