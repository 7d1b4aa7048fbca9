#include "isoindex/json_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace isoindex {

namespace {

Scalar entry_from_json(const RingSpec& ring, const nlohmann::json& e,
                       const std::string& where) {
    if (ring.is_finite()) {
        if (!e.is_number_integer())
            throw SchemaError("gram entry " + where + ": finite-field entries must be integers");
        long v = e.get<long>();
        if (v < 0 || static_cast<std::uint64_t>(v) >= ring.order())
            throw SchemaError("gram entry " + where + ": value out of range for " + ring.name());
        return Scalar::from_index(ring, static_cast<std::uint64_t>(v));
    }
    if (e.is_number_integer()) return Scalar(ring, e.get<long>());
    if (e.is_string()) {
        std::string s = e.get<std::string>();
        try {
            auto slash = s.find('/');
            if (slash == std::string::npos) {
                BigInt v(s);
                return Scalar::from_int(ring, v);
            }
            if (ring.kind() != RingKind::Rationals)
                throw SchemaError("gram entry " + where + ": fractions require ring Q");
            BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
            if (den == 0) throw SchemaError("gram entry " + where + ": zero denominator");
            return Scalar::from_rational(BigRat(num, den));
        } catch (const std::runtime_error& err) {
            throw SchemaError("gram entry " + where + ": " + err.what());
        }
    }
    throw SchemaError("gram entry " + where + ": expected integer or string");
}

}  // namespace

SkewBilinearMap map_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("top level: expected an object");
    for (const char* key : {"ring", "dim_l", "dim_v", "gram"})
        if (!j.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
    if (!j["ring"].is_string()) throw SchemaError("\"ring\": expected a string");
    RingSpec ring = [&] {
        try {
            return RingSpec::parse(j["ring"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw SchemaError(std::string("\"ring\": ") + e.what());
        }
    }();
    if (!j["dim_l"].is_number_integer() || j["dim_l"].get<long>() < 0)
        throw SchemaError("\"dim_l\": expected a non-negative integer");
    if (!j["dim_v"].is_number_integer() || j["dim_v"].get<long>() < 0)
        throw SchemaError("\"dim_v\": expected a non-negative integer");
    std::size_t n = j["dim_l"].get<std::size_t>();
    std::size_t m = j["dim_v"].get<std::size_t>();
    if (!j["gram"].is_array() || j["gram"].size() != m)
        throw SchemaError("\"gram\": expected an array of dim_v matrices");

    std::vector<Matrix> gram;
    for (std::size_t t = 0; t < m; ++t) {
        const auto& jm = j["gram"][t];
        if (!jm.is_array() || jm.size() != n)
            throw SchemaError("\"gram\"[" + std::to_string(t) + "]: expected " +
                              std::to_string(n) + " rows");
        Matrix g(ring, n, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!jm[i].is_array() || jm[i].size() != n)
                throw SchemaError("\"gram\"[" + std::to_string(t) + "][" + std::to_string(i) +
                                  "]: expected " + std::to_string(n) + " entries");
            for (std::size_t c = 0; c < n; ++c)
                g.at(i, c) = entry_from_json(
                    ring, jm[i][c],
                    "[" + std::to_string(t) + "][" + std::to_string(i) + "][" + std::to_string(c) + "]");
        }
        gram.push_back(std::move(g));
    }
    try {
        return SkewBilinearMap::from_gram(ring, n, std::move(gram));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
}

SkewBilinearMap load_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    return map_from_json(j);
}

nlohmann::json map_to_json(const SkewBilinearMap& phi) {
    nlohmann::json j;
    j["ring"] = phi.ring().name();
    j["dim_l"] = phi.dim_l();
    j["dim_v"] = phi.dim_v();
    nlohmann::json gram = nlohmann::json::array();
    for (std::size_t t = 0; t < phi.dim_v(); ++t) {
        nlohmann::json jm = nlohmann::json::array();
        for (std::size_t i = 0; i < phi.dim_l(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t c = 0; c < phi.dim_l(); ++c) {
                const Scalar& s = phi.gram(t).at(i, c);
                if (phi.ring().is_finite())
                    row.push_back(s.index());
                else
                    row.push_back(s.str());
            }
            jm.push_back(std::move(row));
        }
        gram.push_back(std::move(jm));
    }
    j["gram"] = std::move(gram);
    return j;
}

std::string canonical_dump(const nlohmann::json& j) {
    // nlohmann::json keeps object keys sorted; indent-2 dump is stable
    return j.dump(2) + "\n";
}

}  // namespace isoindex
