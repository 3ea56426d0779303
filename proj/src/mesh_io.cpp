#include "expander/mesh.hpp"

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace expander {

namespace {

std::string lower_ext(const std::string& path) {
    std::string e = std::filesystem::path(path).extension().string();
    for (auto& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return e;
}

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
    throw Error(ErrorKind::ParseError, path + ":" + std::to_string(line) + ": " + what);
}

int parse_index(const std::string& tok, int nv, const std::string& path, int line) {
    std::string head = tok.substr(0, tok.find('/'));
    size_t used = 0;
    long v = 0;
    try {
        v = std::stol(head, &used);
    } catch (...) {
        parse_fail(path, line, "bad face index '" + tok + "'");
    }
    if (used != head.size()) parse_fail(path, line, "bad face index '" + tok + "'");
    long idx = v > 0 ? v - 1 : nv + v;
    if (idx < 0 || idx >= nv) parse_fail(path, line, "face index out of range");
    return static_cast<int>(idx);
}

TriMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    TriMesh m;
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ss >> x >> y >> z)) parse_fail(path, ln, "vertex needs three coordinates");
            m.add_vertex(Vec3(x, y, z));
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ss >> tok) idx.push_back(parse_index(tok, static_cast<int>(m.V.size()), path, ln));
            if (idx.size() < 3) parse_fail(path, ln, "face needs at least three vertices");
            for (size_t j = 1; j + 1 < idx.size(); ++j) m.F.push_back({idx[0], idx[j], idx[j + 1]});
        }
    }
    return m;
}

TriMesh load_ply(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    std::string line;
    int ln = 0;
    long nv = -1, nf = -1;
    if (!std::getline(in, line) || line.rfind("ply", 0) != 0) parse_fail(path, 1, "missing ply magic");
    ++ln;
    bool ascii = false, header_done = false;
    while (std::getline(in, line)) {
        ++ln;
        std::istringstream ss(line);
        std::string w;
        ss >> w;
        if (w == "format") {
            std::string f;
            ss >> f;
            ascii = (f == "ascii");
        } else if (w == "element") {
            std::string what;
            long cnt;
            ss >> what >> cnt;
            if (what == "vertex") nv = cnt;
            if (what == "face") nf = cnt;
        } else if (w == "end_header") {
            header_done = true;
            break;
        }
    }
    if (!header_done) parse_fail(path, ln, "header not terminated");
    if (!ascii) parse_fail(path, ln, "only ascii PLY is supported");
    if (nv < 0 || nf < 0) parse_fail(path, ln, "vertex or face element missing");
    TriMesh m;
    for (long i = 0; i < nv; ++i) {
        if (!std::getline(in, line)) parse_fail(path, ln + 1, "truncated vertex list");
        ++ln;
        std::istringstream ss(line);
        double x, y, z;
        if (!(ss >> x >> y >> z)) parse_fail(path, ln, "vertex needs three coordinates");
        m.add_vertex(Vec3(x, y, z));
    }
    for (long i = 0; i < nf; ++i) {
        if (!std::getline(in, line)) parse_fail(path, ln + 1, "truncated face list");
        ++ln;
        std::istringstream ss(line);
        int c;
        if (!(ss >> c) || c < 3) parse_fail(path, ln, "bad face vertex count");
        std::vector<int> idx(c);
        for (int j = 0; j < c; ++j) {
            if (!(ss >> idx[j])) parse_fail(path, ln, "truncated face");
            if (idx[j] < 0 || idx[j] >= nv) parse_fail(path, ln, "face index out of range");
        }
        for (int j = 1; j + 1 < c; ++j) m.F.push_back({idx[0], idx[j], idx[j + 1]});
    }
    return m;
}

void apply_sidecar(TriMesh& m, const std::string& path) {
    std::ifstream in(path);
    if (!in) return;
    nlohmann::json j;
    try {
        in >> j;
        for (const auto& loop : j.at("loops")) {
            int cid = loop.at("curve_id");
            const auto& vs = loop.at("vertices");
            const auto& ps = loop.at("params");
            for (size_t i = 0; i < vs.size(); ++i) {
                int v = vs[i];
                if (v < 0 || v >= static_cast<int>(m.V.size())) throw Error(ErrorKind::ParseError, "sidecar vertex out of range");
                m.tags[v] = {cid, ps[i].get<double>()};
            }
        }
        if (j.contains("fixed")) {
            for (const auto& e : j.at("fixed")) {
                int v = e.at("vertex");
                if (v < 0 || v >= static_cast<int>(m.V.size())) throw Error(ErrorKind::ParseError, "sidecar vertex out of range");
                m.tags[v] = {e.at("curve_id").get<int>(), e.at("param").get<double>()};
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

TriMesh load_mesh(const std::string& path) {
    std::string e = lower_ext(path);
    TriMesh m;
    if (e == ".obj")
        m = load_obj(path);
    else if (e == ".ply")
        m = load_ply(path);
    else
        throw Error(ErrorKind::ParseError, "unknown mesh extension " + e);
    m.ensure_tags();
    apply_sidecar(m, path + ".json");
    return m;
}

void save_mesh(const TriMesh& mesh, const std::string& path) {
    std::string e = lower_ext(path);
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
    if (e == ".obj") {
        out << "# expander-lab mesh\n";
        for (const auto& v : mesh.V) out << "v " << fmt17(v.x()) << ' ' << fmt17(v.y()) << ' ' << fmt17(v.z()) << '\n';
        for (const auto& f : mesh.F) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    } else if (e == ".ply") {
        out << "ply\nformat ascii 1.0\nelement vertex " << mesh.V.size()
            << "\nproperty double x\nproperty double y\nproperty double z\nelement face " << mesh.F.size()
            << "\nproperty list uchar int vertex_indices\nend_header\n";
        for (const auto& v : mesh.V) out << fmt17(v.x()) << ' ' << fmt17(v.y()) << ' ' << fmt17(v.z()) << '\n';
        for (const auto& f : mesh.F) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    } else {
        throw Error(ErrorKind::ParseError, "unknown mesh extension " + e);
    }

    // sidecar: boundary loops with their curve ids, plus any fixed vertex off a loop
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["loops"] = nlohmann::ordered_json::array();
    std::vector<char> listed(mesh.V.size(), 0);
    if (!mesh.F.empty()) {
        Topology t = build_topology(mesh);
        for (size_t l = 0; l < t.boundary_loops.size(); ++l) {
            nlohmann::ordered_json L;
            const auto& loop = t.boundary_loops[l];
            int cid = mesh.tags.empty() ? -1 : mesh.tags[loop[0]].curve;
            L["loop_id"] = l;
            L["curve_id"] = cid;
            std::vector<int> vs;
            std::vector<double> ps;
            for (int v : loop) {
                if (mesh.tags.empty() || !mesh.tags[v].fixed()) continue;
                vs.push_back(v);
                ps.push_back(mesh.tags[v].param);
                listed[v] = 1;
            }
            // mixed curve ids on one loop are written per vertex below
            bool uniform = true;
            for (int v : vs) uniform = uniform && mesh.tags[v].curve == cid;
            if (!uniform) {
                for (int v : vs) listed[v] = 0;
                vs.clear();
                ps.clear();
            }
            L["vertices"] = vs;
            L["params"] = ps;
            j["loops"].push_back(L);
        }
    }
    j["fixed"] = nlohmann::ordered_json::array();
    for (size_t v = 0; v < mesh.tags.size(); ++v)
        if (mesh.tags[v].fixed() && !listed[v])
            j["fixed"].push_back({{"vertex", v}, {"curve_id", mesh.tags[v].curve}, {"param", mesh.tags[v].param}});
    std::ofstream sc(path + ".json");
    sc << j.dump(1) << '\n';
}

}  // namespace expander
