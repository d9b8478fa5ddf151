#include "prgan/uji.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "prgan/cluster.hpp"
#include "prgan/errors.hpp"

namespace prgan::core {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const char* what) {
    if (s.empty()) throw MissingCoordinates(std::string("empty value for ") + what);
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SchemaMismatch(std::string("unparseable number for ") + what + ": " + s);
    }
}

}  // namespace

UjiTable load_uji_full(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw MissingArtifact("cannot open CSV: " + csv_path);

    std::string line;
    if (!std::getline(in, line)) throw SchemaMismatch("empty CSV: " + csv_path);
    auto header = split_csv_line(line);

    std::map<std::string, int> col;
    for (int i = 0; i < static_cast<int>(header.size()); ++i) col[header[i]] = i;

    std::vector<int> wap_cols(kUjiNumAps);
    for (int a = 0; a < kUjiNumAps; ++a) {
        char name[8];
        std::snprintf(name, sizeof(name), "WAP%03d", a + 1);
        auto it = col.find(name);
        if (it == col.end()) throw SchemaMismatch(std::string("missing column ") + name);
        wap_cols[a] = it->second;
    }
    auto need = [&](const char* name) {
        auto it = col.find(name);
        if (it == col.end()) throw SchemaMismatch(std::string("missing column ") + name);
        return it->second;
    };
    int c_lon = need("LONGITUDE"), c_lat = need("LATITUDE");
    int c_floor = need("FLOOR"), c_bld = need("BUILDINGID");

    UjiTable t;
    auto& ds = t.data;
    ds.kind = DataKind::binary;
    ds.dim = kUjiNumAps;

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) < static_cast<int>(header.size()))
            throw SchemaMismatch("short CSV row in " + csv_path);
        for (int a = 0; a < kUjiNumAps; ++a) {
            double v = parse_double(cells[wap_cols[a]], "WAP reading");
            ds.features.push_back(v == static_cast<double>(kUjiNoSignal) ? 0.0 : 1.0);
        }
        if (cells[c_lon].empty() || cells[c_lat].empty())
            throw MissingCoordinates("record without coordinates in " + csv_path);
        t.meta.longitude.push_back(parse_double(cells[c_lon], "LONGITUDE"));
        t.meta.latitude.push_back(parse_double(cells[c_lat], "LATITUDE"));
        t.meta.floor.push_back(static_cast<int>(parse_double(cells[c_floor], "FLOOR")));
        t.meta.building.push_back(static_cast<int>(parse_double(cells[c_bld], "BUILDINGID")));
        ds.num_records++;
    }
    if (ds.num_records == 0) throw SchemaMismatch("CSV has no data rows: " + csv_path);

    // global floor classes over sorted distinct (building, floor) pairs
    std::map<std::pair<int, int>, int> floor_class;
    for (int i = 0; i < ds.num_records; ++i)
        floor_class.emplace(std::make_pair(t.meta.building[i], t.meta.floor[i]), 0);
    int next = 0;
    for (auto& [key, id] : floor_class) id = next++;
    int num_floors = next;

    t.meta.floor_class.resize(ds.num_records);
    for (int i = 0; i < ds.num_records; ++i)
        t.meta.floor_class[i] = floor_class[{t.meta.building[i], t.meta.floor[i]}];

    // per-floor coordinate clustering; sensitive label is global
    ds.target_labels = t.meta.floor_class;
    ds.sensitive_labels.assign(ds.num_records, 0);
    for (int fc = 0; fc < num_floors; ++fc) {
        std::vector<int> members;
        std::vector<Point2> pts;
        for (int i = 0; i < ds.num_records; ++i)
            if (t.meta.floor_class[i] == fc) {
                members.push_back(i);
                pts.push_back({t.meta.longitude[i], t.meta.latitude[i]});
            }
        auto ids = cluster_floor_locations(pts, kUjiClustersPerFloor, kUjiClusterSeed + fc);
        for (std::size_t m = 0; m < members.size(); ++m)
            ds.sensitive_labels[members[m]] = fc * kUjiClustersPerFloor + ids[m];
    }

    ds.num_target_classes = num_floors;
    ds.num_sensitive_classes = num_floors * kUjiClustersPerFloor;
    ds.validate();
    return t;
}

LabeledDataset load_uji(const std::string& csv_path) {
    return load_uji_full(csv_path).data;
}

void write_uji_csv(const std::string& csv_path, const LabeledDataset& data, const UjiMeta& meta) {
    if (data.dim != kUjiNumAps) throw ShapeMismatch("write_uji_csv: dataset is not 520-dim");
    std::ofstream out(csv_path, std::ios::trunc);
    if (!out) throw Error("cannot write CSV: " + csv_path);
    for (int a = 0; a < kUjiNumAps; ++a) {
        char name[8];
        std::snprintf(name, sizeof(name), "WAP%03d", a + 1);
        out << name << ',';
    }
    out << "LONGITUDE,LATITUDE,FLOOR,BUILDINGID\n";
    for (int i = 0; i < data.num_records; ++i) {
        const double* row = data.features.data() + static_cast<std::size_t>(i) * data.dim;
        for (int a = 0; a < kUjiNumAps; ++a) out << (row[a] != 0.0 ? -50 : kUjiNoSignal) << ',';
        out << meta.longitude[i] << ',' << meta.latitude[i] << ',' << meta.floor[i] << ','
            << meta.building[i] << '\n';
    }
}

}  // namespace prgan::core
