#include "carver/instance.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace carver {

    Instance::Instance(std::string name, std::vector<int64_t> xs, std::vector<int64_t> ys, std::vector<int64_t> demands,
                       int64_t capacity)
        : name_(std::move(name)), xs_(std::move(xs)), ys_(std::move(ys)), demands_(std::move(demands)), capacity_(capacity) {
        if (xs_.size() < 2 || xs_.size() != ys_.size() || xs_.size() != demands_.size()) {
            throw ParseError("instance needs a depot and at least one customer");
        }
        if (capacity_ <= 0) {
            throw ParseError("capacity must be positive");
        }
        if (demands_[0] != 0) {
            throw ParseError("depot demand must be zero");
        }
        for (size_t i = 1; i < demands_.size(); ++i) {
            if (demands_[i] < 1) {
                throw ParseError("customer " + std::to_string(i) + " has demand < 1");
            }
            if (demands_[i] > capacity_) {
                throw ParseError("customer " + std::to_string(i) + " demand exceeds capacity");
            }
            total_demand_ += demands_[i];
        }
    }

    namespace {

        std::string trim(const std::string &s) {
            size_t b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos) return "";
            size_t e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        }

        // Splits "KEY : value" header lines; returns false for section markers.
        bool split_header(const std::string &line, std::string &key, std::string &value) {
            const auto colon = line.find(':');
            if (colon == std::string::npos) return false;
            key = trim(line.substr(0, colon));
            value = trim(line.substr(colon + 1));
            return true;
        }

    }  // namespace

    Instance parse_instance(const std::string &text) {
        std::istringstream in(text);
        std::string line;

        std::string name = "unnamed";
        int dimension = -1;
        int64_t capacity = -1;
        std::string weight_type;
        bool have_coords = false, have_demands = false;
        std::vector<int64_t> xs, ys, demands;
        std::unordered_map<int, int> id_to_pos;  // file vertex id -> position in xs/ys
        std::vector<int> file_ids;
        int depot_id = -1;

        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty()) continue;

            if (line == "NODE_COORD_SECTION") {
                if (dimension <= 0) throw ParseError("NODE_COORD_SECTION before DIMENSION");
                xs.resize(dimension);
                ys.resize(dimension);
                file_ids.resize(dimension);
                for (int n = 0; n < dimension; ++n) {
                    int id;
                    double x, y;
                    if (!(in >> id >> x >> y)) throw ParseError("malformed NODE_COORD_SECTION");
                    if (id_to_pos.count(id)) throw ParseError("duplicate vertex id " + std::to_string(id));
                    id_to_pos[id] = n;
                    file_ids[n] = id;
                    xs[n] = static_cast<int64_t>(std::llround(x));
                    ys[n] = static_cast<int64_t>(std::llround(y));
                }
                have_coords = true;
                continue;
            }
            if (line == "DEMAND_SECTION") {
                if (!have_coords) throw ParseError("DEMAND_SECTION before NODE_COORD_SECTION");
                demands.resize(dimension);
                std::unordered_set<int> seen;
                for (int n = 0; n < dimension; ++n) {
                    int id;
                    int64_t q;
                    if (!(in >> id >> q)) throw ParseError("malformed DEMAND_SECTION");
                    auto it = id_to_pos.find(id);
                    if (it == id_to_pos.end()) throw ParseError("demand for unknown vertex id " + std::to_string(id));
                    if (!seen.insert(id).second) throw ParseError("duplicate demand for vertex id " + std::to_string(id));
                    demands[it->second] = q;
                }
                have_demands = true;
                continue;
            }
            if (line == "DEPOT_SECTION") {
                int id;
                if (!(in >> id)) throw ParseError("malformed DEPOT_SECTION");
                depot_id = id;
                // consume the closing -1 if present
                int terminator;
                if (in >> terminator && terminator != -1) throw ParseError("multiple depots are not supported");
                continue;
            }
            if (line == "EOF") break;

            std::string key, value;
            if (!split_header(line, key, value)) continue;
            if (key == "NAME") name = value;
            else if (key == "DIMENSION") dimension = std::stoi(value);
            else if (key == "CAPACITY") capacity = std::stoll(value);
            else if (key == "EDGE_WEIGHT_TYPE") weight_type = value;
        }

        if (dimension <= 1) throw ParseError("missing or invalid DIMENSION");
        if (capacity <= 0) throw ParseError("missing or invalid CAPACITY");
        if (weight_type != "EUC_2D") throw ParseError("unsupported weight type: " + (weight_type.empty() ? "(none)" : weight_type));
        if (!have_coords) throw ParseError("missing NODE_COORD_SECTION");
        if (!have_demands) throw ParseError("missing DEMAND_SECTION");

        // Implicit depot: first listed node.
        int depot_pos;
        if (depot_id >= 0) {
            auto it = id_to_pos.find(depot_id);
            if (it == id_to_pos.end()) throw ParseError("DEPOT_SECTION names an unknown vertex");
            depot_pos = it->second;
        } else {
            depot_pos = 0;
        }

        std::vector<int64_t> oxs, oys, oq;
        oxs.reserve(dimension);
        oys.reserve(dimension);
        oq.reserve(dimension);
        oxs.push_back(xs[depot_pos]);
        oys.push_back(ys[depot_pos]);
        oq.push_back(demands[depot_pos]);
        for (int n = 0; n < dimension; ++n) {
            if (n == depot_pos) continue;
            oxs.push_back(xs[n]);
            oys.push_back(ys[n]);
            oq.push_back(demands[n]);
        }
        if (oq[0] != 0) throw ParseError("depot demand must be zero");

        return Instance(name, std::move(oxs), std::move(oys), std::move(oq), capacity);
    }

    Instance load_instance(const std::string &path) {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open instance file: " + path);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return parse_instance(buffer.str());
    }

    std::string serialize_instance(const Instance &instance) {
        std::ostringstream out;
        out << "NAME : " << instance.name() << "\n";
        out << "TYPE : CVRP\n";
        out << "DIMENSION : " << instance.num_vertices() << "\n";
        out << "EDGE_WEIGHT_TYPE : EUC_2D\n";
        out << "CAPACITY : " << instance.capacity() << "\n";
        out << "NODE_COORD_SECTION\n";
        for (int i = 0; i < instance.num_vertices(); ++i) {
            out << (i + 1) << " " << instance.x(i) << " " << instance.y(i) << "\n";
        }
        out << "DEMAND_SECTION\n";
        for (int i = 0; i < instance.num_vertices(); ++i) {
            out << (i + 1) << " " << instance.demand(i) << "\n";
        }
        out << "DEPOT_SECTION\n1\n-1\nEOF\n";
        return out.str();
    }

    Instance generate_instance(const std::vector<std::pair<double, double>> &points, int depot_index, int64_t capacity,
                               Rng &rng, const std::string &name) {
        if (points.size() < 2) throw std::invalid_argument("need at least 2 points");
        if (depot_index < 0 || depot_index >= static_cast<int>(points.size())) {
            throw std::invalid_argument("depot index out of range");
        }
        if (capacity < 3) throw std::invalid_argument("capacity must be at least 3");

        const int n = static_cast<int>(points.size());
        std::vector<int64_t> xs, ys, demands;
        xs.reserve(n);
        ys.reserve(n);
        demands.reserve(n);
        xs.push_back(static_cast<int64_t>(std::llround(points[depot_index].first)));
        ys.push_back(static_cast<int64_t>(std::llround(points[depot_index].second)));
        demands.push_back(0);
        for (int i = 0; i < n; ++i) {
            if (i == depot_index) continue;
            xs.push_back(static_cast<int64_t>(std::llround(points[i].first)));
            ys.push_back(static_cast<int64_t>(std::llround(points[i].second)));
            demands.push_back(rng.uniform_int(1, 3));
        }
        return Instance(name, std::move(xs), std::move(ys), std::move(demands), capacity);
    }

    std::vector<std::pair<int64_t, int64_t>> project_coordinates(const std::vector<std::pair<double, double>> &latlon) {
        constexpr double kEarthRadius = 6371000.0;
        constexpr double kDegToRad = std::numbers::pi / 180.0;

        double lat0 = 0.0, lon0 = 0.0;
        for (const auto &[lat, lon] : latlon) {
            if (lat < -90.0 || lat > 90.0 || lon < -180.0 || lon > 180.0) {
                throw std::invalid_argument("geographic coordinate out of range");
            }
            lat0 += lat;
            lon0 += lon;
        }
        lat0 /= static_cast<double>(latlon.size());
        lon0 /= static_cast<double>(latlon.size());

        std::vector<std::pair<int64_t, int64_t>> planar;
        planar.reserve(latlon.size());
        const double cos_lat0 = std::cos(lat0 * kDegToRad);
        for (const auto &[lat, lon] : latlon) {
            const double x = kEarthRadius * (lon - lon0) * kDegToRad * cos_lat0;
            const double y = kEarthRadius * (lat - lat0) * kDegToRad;
            planar.emplace_back(static_cast<int64_t>(std::llround(x)), static_cast<int64_t>(std::llround(y)));
        }
        return planar;
    }

}  // namespace carver
