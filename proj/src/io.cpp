#include "yma/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace yma {

static_assert(std::endian::native == std::endian::little, "field files are written little-endian");

namespace {

constexpr char kMagic[4] = {'Y', 'M', 'A', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& os, const T& v)
{
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is)
{
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw IoError("truncated field header");
    return v;
}

void write_file(const std::string& path, const Lattice4D& L, FieldKind kind, const std::vector<double>& data)
{
    const std::uint64_t nodes = L.size();
    const auto comps = static_cast<std::uint32_t>(components(kind));
    if (data.size() != nodes * comps) throw IoError("field size does not match the lattice");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path);
    os.write(kMagic, 4);
    put(os, kVersion);
    put(os, L.R());
    put(os, L.h());
    put(os, std::int32_t(L.n_axis()));
    put(os, std::int32_t(L.pad()));
    put(os, nodes);
    put(os, std::uint32_t(kind));
    put(os, comps);
    os.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size() * sizeof(double)));
    if (!os) throw IoError("write failed: " + path);

    nlohmann::ordered_json j;
    j["format"] = "yma-field";
    j["version"] = kVersion;
    j["kind"] = kind_name(kind);
    j["R"] = L.R();
    j["h"] = L.h();
    j["n_axis"] = L.n_axis();
    j["pad"] = L.pad();
    j["nodes"] = nodes;
    j["components"] = comps;
    j["layout"] = "node-major, component-major float64 little-endian";
    std::ofstream js(path + ".json");
    if (!js) throw IoError("cannot open " + path + ".json");
    js << j.dump(2) << '\n';
}

} // namespace

int components(FieldKind k)
{
    switch (k) {
    case FieldKind::Scalar0: return 3;
    case FieldKind::Form1: return 12;
    case FieldKind::Curv6: return 18;
    }
    throw IoError("unknown field kind");
}

const char* kind_name(FieldKind k)
{
    switch (k) {
    case FieldKind::Scalar0: return "scalar0";
    case FieldKind::Form1: return "form1";
    case FieldKind::Curv6: return "curv6";
    }
    throw IoError("unknown field kind");
}

void save_field(const std::string& path, const Lattice4D& L, const Field0& f)
{
    std::vector<double> d;
    d.reserve(f.size() * 3);
    for (const auto& v : f) d.insert(d.end(), {v.x, v.y, v.z});
    write_file(path, L, FieldKind::Scalar0, d);
}

void save_field(const std::string& path, const Lattice4D& L, const Field1& f)
{
    std::vector<double> d;
    d.reserve(f.size() * 12);
    for (const auto& a : f)
        for (const auto& v : a) d.insert(d.end(), {v.x, v.y, v.z});
    write_file(path, L, FieldKind::Form1, d);
}

void save_field(const std::string& path, const Lattice4D& L, const Field2& f)
{
    std::vector<double> d;
    d.reserve(f.size() * 18);
    for (const auto& c : f)
        for (const auto& v : c) d.insert(d.end(), {v.x, v.y, v.z});
    write_file(path, L, FieldKind::Curv6, d);
}

FieldFile load_field(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) throw IoError("not a field file: " + path);
    if (get<std::uint32_t>(is) != kVersion) throw IoError("unsupported field file version");
    FieldFile f;
    f.R = get<double>(is);
    f.h = get<double>(is);
    f.n_axis = get<std::int32_t>(is);
    f.pad = get<std::int32_t>(is);
    f.nodes = get<std::uint64_t>(is);
    auto kind = get<std::uint32_t>(is);
    if (kind > 2) throw IoError("unknown field kind");
    f.kind = FieldKind(kind);
    auto comps = get<std::uint32_t>(is);
    if (int(comps) != components(f.kind)) throw IoError("component count does not match the kind");
    f.data.resize(f.nodes * comps);
    is.read(reinterpret_cast<char*>(f.data.data()), std::streamsize(f.data.size() * sizeof(double)));
    if (!is) throw IoError("truncated field body");
    if (is.peek() != std::ifstream::traits_type::eof()) throw IoError("trailing bytes in field file");

    std::ifstream js(path + ".json");
    if (js) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(js);
        } catch (const nlohmann::json::exception& e) {
            throw IoError(std::string("bad sidecar: ") + e.what());
        }
        if (j.value("kind", "") != kind_name(f.kind) || j.value("n_axis", -1) != f.n_axis ||
            j.value("pad", -1) != f.pad || j.value("nodes", std::uint64_t(0)) != f.nodes ||
            j.value("R", 0.0) != f.R || j.value("h", 0.0) != f.h)
            throw IoError("sidecar does not match " + path);
    }
    return f;
}

std::shared_ptr<Lattice4D> FieldFile::lattice() const
{
    auto L = std::make_shared<Lattice4D>(R, n_axis, pad);
    if (L->size() != nodes || L->h() != h) throw IoError("stored lattice does not rebuild to the same nodes");
    return L;
}

Field0 FieldFile::scalar0() const
{
    if (kind != FieldKind::Scalar0) throw IoError("field is not a 0-form");
    Field0 out(nodes);
    for (std::size_t n = 0; n < nodes; ++n) out[n] = {data[3 * n], data[3 * n + 1], data[3 * n + 2]};
    return out;
}

Field1 FieldFile::form1() const
{
    if (kind != FieldKind::Form1) throw IoError("field is not a 1-form");
    Field1 out(nodes);
    for (std::size_t n = 0; n < nodes; ++n)
        for (int i = 0; i < 4; ++i) {
            const double* p = &data[12 * n + 3 * i];
            out[n][i] = {p[0], p[1], p[2]};
        }
    return out;
}

Field2 FieldFile::curv6() const
{
    if (kind != FieldKind::Curv6) throw IoError("field is not a 2-form");
    Field2 out(nodes);
    for (std::size_t n = 0; n < nodes; ++n)
        for (int p = 0; p < 6; ++p) {
            const double* q = &data[18 * n + 3 * p];
            out[n][p] = {q[0], q[1], q[2]};
        }
    return out;
}

} // namespace yma
