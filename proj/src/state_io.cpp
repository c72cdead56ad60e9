#include "renyi/state_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace renyi {

using nlohmann::json;

namespace {

json complex_to_json(const std::complex<double>& z) {
    return json::array({z.real(), z.imag()});
}

std::complex<double> complex_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ValidationError(where + ": complex entries must be [re, im] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

StateVariant parse_state_json(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        throw ValidationError(origin + ": missing string field \"kind\"");
    }
    const std::string kind = j["kind"].get<std::string>();

    if (kind == "density") {
        if (!j.contains("dim") || !j["dim"].is_number_integer()) {
            throw ValidationError(origin + ": density state needs integer \"dim\"");
        }
        const int d = j["dim"].get<int>();
        if (d < 1) throw ValidationError(origin + ": dim must be positive");
        if (!j.contains("matrix") || !j["matrix"].is_array() ||
            static_cast<int>(j["matrix"].size()) != d) {
            throw ValidationError(origin + ": \"matrix\" must be a " + std::to_string(d) +
                                  "-row array");
        }
        Matrix m(d, d);
        for (int r = 0; r < d; ++r) {
            const json& row = j["matrix"][r];
            if (!row.is_array() || static_cast<int>(row.size()) != d) {
                throw ValidationError(origin + ": matrix row " + std::to_string(r) +
                                      " must have " + std::to_string(d) + " entries");
            }
            for (int c = 0; c < d; ++c) {
                m(r, c) = complex_from_json(
                    row[c], origin + ": matrix[" + std::to_string(r) + "][" +
                                std::to_string(c) + "]");
            }
        }
        try {
            return DensityMatrix(std::move(m));
        } catch (const ValidationError& e) {
            throw ValidationError(origin + ": " + e.what());
        }
    }

    if (kind == "classical") {
        if (!j.contains("weights") || !j["weights"].is_array() || j["weights"].empty()) {
            throw ValidationError(origin + ": classical state needs \"weights\"");
        }
        const std::size_t n = j["weights"].size();
        RealVector w(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (!j["weights"][i].is_number()) {
                throw ValidationError(origin + ": weights[" + std::to_string(i) +
                                      "] is not a number");
            }
            w[static_cast<Eigen::Index>(i)] = j["weights"][i].get<double>();
        }
        std::vector<std::string> labels;
        if (j.contains("labels")) {
            if (!j["labels"].is_array() || j["labels"].size() != n) {
                throw ValidationError(origin + ": \"labels\" must match weights length");
            }
            for (const auto& item : j["labels"]) {
                if (!item.is_string()) {
                    throw ValidationError(origin + ": labels must be strings");
                }
                labels.push_back(item.get<std::string>());
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
        }
        try {
            return ClassicalState(std::move(labels), std::move(w));
        } catch (const ValidationError& e) {
            throw ValidationError(origin + ": " + e.what());
        }
    }

    throw ValidationError(origin + ": unknown kind \"" + kind + "\"");
}

StateVariant read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_state_json(buffer.str(), path);
}

std::string state_to_json(const DensityMatrix& rho) {
    json j;
    j["kind"] = "density";
    j["dim"] = rho.dim();
    json rows = json::array();
    for (int r = 0; r < rho.dim(); ++r) {
        json row = json::array();
        for (int c = 0; c < rho.dim(); ++c) {
            row.push_back(complex_to_json(rho.entries()(r, c)));
        }
        rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    return j.dump(2);
}

std::string state_to_json(const ClassicalState& p) {
    json j;
    j["kind"] = "classical";
    j["weights"] = json::array();
    for (int i = 0; i < p.size(); ++i) j["weights"].push_back(p.weight(i));
    j["labels"] = p.labels();
    return j.dump(2);
}

std::string state_to_json(const StateVariant& state) {
    return std::visit([](const auto& s) { return state_to_json(s); }, state);
}

void write_state_file(const std::string& path, const StateVariant& state) {
    std::ofstream out(path);
    if (!out) throw ValidationError(path + ": cannot open for writing");
    out << state_to_json(state) << "\n";
}

std::string format_value(double v) {
    if (std::isinf(v) && v > 0) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) row += ",";
        row += cells[i];
    }
    row += "\n";
    return row;
}

}  // namespace renyi
