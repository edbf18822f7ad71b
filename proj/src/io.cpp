#include "ancient_heat/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ancient_heat/errors.hpp"

namespace ancient_heat {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_number(double v) {
    if (!std::isfinite(v)) return "null";
    return format_double(v);
}

std::string json_number(std::optional<double> v) {
    if (!v) return "null";
    return json_number(*v);
}

std::string json_number(std::optional<int> v) {
    if (!v) return "null";
    return std::to_string(*v);
}

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw input_error("cannot open " + tmp + " for writing");
        out << content;
        if (!out) throw input_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw input_error("cannot rename " + tmp + " to " + path);
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

DomainGraph read_domain_json(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::exception& e) {
        throw input_error(path + ": JSON parse error: " + e.what());
    }
    DomainGraph g;
    try {
        g.n = j.at("n").get<int>();
        g.origin = j.at("origin").get<int>();
        for (const auto& row : j.at("edges")) {
            if (!row.is_array() || row.size() != 3)
                throw input_error(path + ": edge rows must be [i, j, w]");
            g.edges.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
        }
        if (j.contains("lattice") && !j.at("lattice").is_null()) {
            const auto& l = j.at("lattice");
            LatticeMeta m;
            m.dims = l.at("dims").get<std::vector<int>>();
            m.h = l.at("h").get<double>();
            m.boundary = boundary_from_name(l.at("boundary").get<std::string>());
            g.lattice = m;
        }
    } catch (const nlohmann::json::exception& e) {
        throw input_error(path + ": bad domain schema: " + e.what());
    }
    try {
        g.validate();
    } catch (const input_error& e) {
        throw input_error(path + ": " + e.what());
    }
    return g;
}

std::string domain_to_json(const DomainGraph& g) {
    std::ostringstream out;
    out << "{\"n\": " << g.n << ", \"edges\": [";
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        if (i) out << ", ";
        out << "[" << e.u << ", " << e.v << ", " << format_double(e.w) << "]";
    }
    out << "], \"origin\": " << g.origin << ", \"lattice\": ";
    if (g.lattice) {
        out << "{\"dims\": [";
        for (std::size_t k = 0; k < g.lattice->dims.size(); ++k) {
            if (k) out << ", ";
            out << g.lattice->dims[k];
        }
        out << "], \"h\": " << format_double(g.lattice->h) << ", \"boundary\": \""
            << boundary_name(g.lattice->boundary) << "\"}";
    } else {
        out << "null";
    }
    out << "}\n";
    return out.str();
}

void write_domain_json(const DomainGraph& g, const std::string& path) {
    atomic_write(path, domain_to_json(g));
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw input_error(where + ": not a number: \"" + s + "\"");
    }
}

int parse_int(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw input_error(where + ": not an integer: \"" + s + "\"");
    }
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace

ScalarField read_scalar_csv(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.empty() || lines[0] != "vertex,value")
        throw input_error(path + ": expected header \"vertex,value\"");
    ScalarField a;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto cells = split_csv_row(lines[i]);
        std::string where = path + ":" + std::to_string(i + 1);
        if (cells.size() != 2) throw input_error(where + ": expected 2 columns");
        int v = parse_int(cells[0], where);
        if (v != int(i) - 1)
            throw input_error(where + ": vertex ids must be 0..n-1 in order, got " + cells[0]);
        double x = parse_double(cells[1], where);
        if (!std::isfinite(x)) throw input_error(where + ": non-finite value");
        a.push_back(x);
    }
    if (a.empty()) throw input_error(path + ": no data rows");
    return a;
}

std::string scalar_to_csv(const ScalarField& a) {
    std::ostringstream out;
    out << "vertex,value\n";
    for (std::size_t v = 0; v < a.size(); ++v) out << v << "," << format_double(a[v]) << "\n";
    return out.str();
}

void write_scalar_csv(const ScalarField& a, const std::string& path) {
    atomic_write(path, scalar_to_csv(a));
}

SpaceTimeField read_spacetime_csv(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.empty() || lines[0] != "vertex,t,value")
        throw input_error(path + ": expected header \"vertex,t,value\"");
    std::map<double, std::map<int, double>> slices;
    int nmax = -1;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto cells = split_csv_row(lines[i]);
        std::string where = path + ":" + std::to_string(i + 1);
        if (cells.size() != 3) throw input_error(where + ": expected 3 columns");
        int v = parse_int(cells[0], where);
        double t = parse_double(cells[1], where);
        double x = parse_double(cells[2], where);
        if (v < 0) throw input_error(where + ": negative vertex id");
        if (!slices[t].insert({v, x}).second)
            throw input_error(where + ": duplicate (vertex, t) sample");
        nmax = std::max(nmax, v);
    }
    if (nmax < 0) throw input_error(path + ": no data rows");

    SpaceTimeField u;
    u.n = nmax + 1;
    for (const auto& [t, slice] : slices) {
        if (int(slice.size()) != u.n)
            throw input_error(path + ": time slice t=" + format_double(t) + " is incomplete");
        u.times.push_back(t);
        for (const auto& [v, x] : slice) {
            (void)v;
            u.values.push_back(x);
        }
    }
    u.validate();
    return u;
}

std::string spacetime_to_csv(const SpaceTimeField& u) {
    std::ostringstream out;
    out << "vertex,t,value\n";
    for (std::size_t ti = 0; ti < u.times.size(); ++ti)
        for (int v = 0; v < u.n; ++v)
            out << v << "," << format_double(u.times[ti]) << ","
                << format_double(u.at(v, int(ti))) << "\n";
    return out.str();
}

void write_spacetime_csv(const SpaceTimeField& u, const std::string& path) {
    atomic_write(path, spacetime_to_csv(u));
}

}  // namespace ancient_heat
