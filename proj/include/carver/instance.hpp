#ifndef CARVER_INSTANCE_HPP
#define CARVER_INSTANCE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rng.hpp"

namespace carver {

    class ParseError : public std::runtime_error {
    public:
        explicit ParseError(const std::string &what) : std::runtime_error(what) { }
    };

    // Immutable CVRP instance. Vertex 0 is the depot, customers are 1..N.
    // Coordinates and demands are integers, costs are rounded Euclidean
    // distances carried as doubles.
    class Instance {
    public:
        Instance(std::string name, std::vector<int64_t> xs, std::vector<int64_t> ys, std::vector<int64_t> demands,
                 int64_t capacity);

        int num_vertices() const {
            return static_cast<int>(xs_.size());
        }
        int num_customers() const {
            return num_vertices() - 1;
        }
        int64_t capacity() const {
            return capacity_;
        }
        int64_t demand(int i) const {
            return demands_[i];
        }
        int64_t x(int i) const {
            return xs_[i];
        }
        int64_t y(int i) const {
            return ys_[i];
        }
        const std::string &name() const {
            return name_;
        }
        int64_t total_demand() const {
            return total_demand_;
        }

        // Rounded Euclidean arc cost, integral value carried in a double.
        double cost(int i, int j) const {
            const double dx = static_cast<double>(xs_[i] - xs_[j]);
            const double dy = static_cast<double>(ys_[i] - ys_[j]);
            return std::round(std::sqrt(dx * dx + dy * dy));
        }

    private:
        std::string name_;
        std::vector<int64_t> xs_;
        std::vector<int64_t> ys_;
        std::vector<int64_t> demands_;
        int64_t capacity_ = 0;
        int64_t total_demand_ = 0;
    };

    // Parses a CVRPLIB/TSPLIB EUC_2D document. The depot (DEPOT_SECTION entry,
    // or the first listed node when the section is missing) is remapped to
    // index 0, customers to 1..N preserving file order.
    Instance parse_instance(const std::string &text);

    // Reads and parses an instance file.
    Instance load_instance(const std::string &path);

    // Emits the same CVRPLIB format accepted by parse_instance.
    std::string serialize_instance(const Instance &instance);

    // Builds an instance from planar points: coordinates rounded to integers,
    // demands uniform in {1, 2, 3}, the point at depot_index becomes the depot.
    Instance generate_instance(const std::vector<std::pair<double, double>> &points, int depot_index, int64_t capacity,
                               Rng &rng, const std::string &name = "generated");

    // Local equirectangular projection about the centroid, in integer meters:
    // x = R * dlon * cos(lat0), y = R * dlat with R = 6371000.
    std::vector<std::pair<int64_t, int64_t>> project_coordinates(const std::vector<std::pair<double, double>> &latlon);

}  // namespace carver

#endif
