#pragma once

#include <array>

#include "yma/quaternion.hpp"

namespace yma {

// Chart components of an Im H valued 1-form, A = sum_i A_i dzeta^i.
using Form1 = std::array<ImQ, 4>;

// Chart components of an Im H valued 2-form; antisymmetric by construction.
struct Curv {
    std::array<std::array<ImQ, 4>, 4> c{};

    const ImQ& operator()(int i, int j) const { return c[i][j]; }
    void set(int i, int j, const ImQ& v)
    {
        c[i][j] = v;
        c[j][i] = -v;
    }
    void add(int i, int j, const ImQ& v)
    {
        c[i][j] += v;
        c[j][i] -= v;
    }
};

inline Curv operator+(const Curv& a, const Curv& b)
{
    Curv r;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) r.set(i, j, a(i, j) + b(i, j));
    return r;
}
inline Curv operator-(const Curv& a, const Curv& b)
{
    Curv r;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) r.set(i, j, a(i, j) - b(i, j));
    return r;
}
inline Curv operator*(double s, const Curv& a)
{
    Curv r;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) r.set(i, j, s * a(i, j));
    return r;
}

// Full double sum over ordered index pairs, flat (chart) metric.
inline double flat_norm2(const Curv& F)
{
    double s = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += norm2(F(i, j));
    return s;
}
inline double flat_dot(const Curv& F, const Curv& G)
{
    double s = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += dot(F(i, j), G(i, j));
    return s;
}
inline double flat_norm2(const Form1& a)
{
    return norm2(a[0]) + norm2(a[1]) + norm2(a[2]) + norm2(a[3]);
}
inline double flat_dot(const Form1& a, const Form1& b)
{
    return dot(a[0], b[0]) + dot(a[1], b[1]) + dot(a[2], b[2]) + dot(a[3], b[3]);
}
inline Form1 operator+(const Form1& a, const Form1& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }
inline Form1 operator-(const Form1& a, const Form1& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }
inline Form1 operator*(double s, const Form1& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }

// J[i][j] = d_i Gamma_j.
using FormJac = std::array<Form1, 4>;

} // namespace yma
