#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "yma/lattice_ops.hpp"

namespace yma {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class FieldKind { Scalar0, Form1, Curv6 };

int components(FieldKind k);
const char* kind_name(FieldKind k);

// Flat binary field file plus "<path>.json" sidecar.
//   header: "YMAF", u32 version, f64 R, f64 h, i32 n_axis, i32 pad, u64 nodes, u32 kind, u32 components
//   body:   nodes x components float64, node-major, little-endian
struct FieldFile {
    double R = 0, h = 0;
    int n_axis = 0, pad = 0;
    FieldKind kind = FieldKind::Form1;
    std::uint64_t nodes = 0;
    std::vector<double> data;

    std::shared_ptr<Lattice4D> lattice() const;
    Field0 scalar0() const;
    Field1 form1() const;
    Field2 curv6() const;
};

void save_field(const std::string& path, const Lattice4D& L, const Field0& f);
void save_field(const std::string& path, const Lattice4D& L, const Field1& f);
void save_field(const std::string& path, const Lattice4D& L, const Field2& f);
// Checks the sidecar against the header when it exists.
FieldFile load_field(const std::string& path);

} // namespace yma
