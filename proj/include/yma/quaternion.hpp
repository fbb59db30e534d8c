#pragma once

#include <cmath>

namespace yma {

struct ImQ {
    double x = 0, y = 0, z = 0;

    ImQ& operator+=(const ImQ& o) { x += o.x; y += o.y; z += o.z; return *this; }
    ImQ& operator-=(const ImQ& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    ImQ& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline ImQ operator+(ImQ a, const ImQ& b) { return a += b; }
inline ImQ operator-(ImQ a, const ImQ& b) { return a -= b; }
inline ImQ operator-(const ImQ& a) { return {-a.x, -a.y, -a.z}; }
inline ImQ operator*(double s, ImQ a) { return a *= s; }
inline ImQ operator*(ImQ a, double s) { return a *= s; }
inline ImQ operator/(ImQ a, double s) { return a *= 1.0 / s; }

inline double dot(const ImQ& a, const ImQ& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm2(const ImQ& a) { return dot(a, a); }
inline double norm(const ImQ& a) { return std::sqrt(norm2(a)); }
inline ImQ cross(const ImQ& a, const ImQ& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
// ab - ba; for imaginary quaternions this is 2 a x b.
inline ImQ bracket(const ImQ& a, const ImQ& b) { return 2.0 * cross(a, b); }

struct Quat {
    double w = 0, x = 0, y = 0, z = 0;

    Quat() = default;
    Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}
    Quat(double s) : w(s) {}
    Quat(const ImQ& v) : w(0), x(v.x), y(v.y), z(v.z) {}

    double operator[](int k) const { return k == 0 ? w : k == 1 ? x : k == 2 ? y : z; }
    double& operator[](int k) { return k == 0 ? w : k == 1 ? x : k == 2 ? y : z; }

    Quat& operator+=(const Quat& o) { w += o.w; x += o.x; y += o.y; z += o.z; return *this; }
    Quat& operator-=(const Quat& o) { w -= o.w; x -= o.x; y -= o.y; z -= o.z; return *this; }
    Quat& operator*=(double s) { w *= s; x *= s; y *= s; z *= s; return *this; }
};

inline Quat operator+(Quat a, const Quat& b) { return a += b; }
inline Quat operator-(Quat a, const Quat& b) { return a -= b; }
inline Quat operator-(const Quat& a) { return {-a.w, -a.x, -a.y, -a.z}; }
inline Quat operator*(double s, Quat a) { return a *= s; }
inline Quat operator*(Quat a, double s) { return a *= s; }

inline Quat mul(const Quat& a, const Quat& b)
{
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}
inline Quat operator*(const Quat& a, const Quat& b) { return mul(a, b); }

inline Quat conj(const Quat& q) { return {q.w, -q.x, -q.y, -q.z}; }
inline double norm2(const Quat& q) { return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z; }
inline double norm(const Quat& q) { return std::sqrt(norm2(q)); }
inline Quat inverse(const Quat& q) { return conj(q) * (1.0 / norm2(q)); }
inline ImQ im_part(const Quat& q) { return {q.x, q.y, q.z}; }
inline double dot(const Quat& a, const Quat& b) { return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z; }

// Basis e = (1, i, j, k) of H = R^4.
inline Quat basis(int k)
{
    Quat q;
    q[k] = 1.0;
    return q;
}

inline Quat exp_im(const ImQ& s)
{
    double t = norm(s);
    if (t == 0.0) return Quat(1.0);
    double c = std::sin(t) / t;
    return {std::cos(t), c * s.x, c * s.y, c * s.z};
}

// Inverse of exp_im on unit quaternions, principal branch |s| <= pi.
inline ImQ log_unit(const Quat& q)
{
    double v = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
    if (v == 0.0) return {};
    double t = std::atan2(v, q.w);
    return ImQ{q.x, q.y, q.z} * (t / v);
}

// q^{-1} a q for a unit quaternion q.
inline ImQ conjugate_by(const Quat& q, const ImQ& a) { return im_part(conj(q) * Quat(a) * q); }

} // namespace yma
