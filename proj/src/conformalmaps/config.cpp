#include "confcoord/conformalmaps/config.hpp"

#include "confcoord/errors.hpp"

#include <cmath>

namespace confcoord::conformalmaps {

using nlohmann::json;

Eigen::MatrixXd plane_rotation(int n, int i, int j, double angle)
{
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
        throw ConfigError("rotation plane axes must be distinct coordinates");
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
    q(i, i) = std::cos(angle);
    q(j, j) = std::cos(angle);
    q(i, j) = -std::sin(angle);
    q(j, i) = std::sin(angle);
    return q;
}

namespace {

Eigen::VectorXd vector_of(const json& v, int n, const char* what)
{
    if (!v.is_array() || static_cast<int>(v.size()) != n)
        throw ConfigError(std::string(what) + " needs " + std::to_string(n) + " numbers");
    Eigen::VectorXd out(n);
    for (int a = 0; a < n; ++a) {
        if (!v[a].is_number())
            throw ConfigError(std::string(what) + " entries must be numbers");
        out[a] = v[a].get<double>();
    }
    return out;
}

MobiusMap step_from_json(const json& s, int n)
{
    if (!s.is_object() || s.size() != 1)
        throw ConfigError("each Möbius step must be an object with one key");
    auto it = s.begin();
    const std::string key = it.key();
    const json& value = it.value();
    if (key == "translate")
        return MobiusMap::translation(vector_of(value, n, "translate"));
    if (key == "dilate") {
        if (!value.is_number())
            throw ConfigError("dilate needs a number");
        try {
            return MobiusMap::dilation(n, value.get<double>());
        } catch (const ArgumentError& e) {
            throw ConfigError(e.what());
        }
    }
    if (key == "invert") {
        if (!value.is_boolean() || !value.get<bool>())
            throw ConfigError("invert must be true");
        return MobiusMap::inversion(n);
    }
    if (key == "rotate") {
        Eigen::MatrixXd q;
        if (value.is_object()) {
            auto axes = value.value("axes", json::array());
            if (!axes.is_array() || axes.size() != 2 || !value.contains("angle"))
                throw ConfigError("rotate needs \"axes\": [i, j] and \"angle\"");
            q = plane_rotation(n, axes[0].get<int>(), axes[1].get<int>(), value["angle"].get<double>());
        } else {
            if (!value.is_array() || static_cast<int>(value.size()) != n)
                throw ConfigError("rotate matrix must have one row per coordinate");
            q.resize(n, n);
            for (int i = 0; i < n; ++i)
                q.row(i) = vector_of(value[i], n, "rotate row").transpose();
        }
        try {
            return MobiusMap::rotation(q);
        } catch (const ArgumentError& e) {
            throw ConfigError(e.what());
        }
    }
    throw ConfigError("unknown Möbius step \"" + key + "\"");
}

} // namespace

MobiusMap mobius_from_json(const json& spec)
{
    if (!spec.is_object())
        throw ConfigError("Möbius map must be an object");
    int n = spec.value("dim", 3);
    if (n < 2 || n > jets::kMaxDim)
        throw ConfigError("Möbius map dimension out of range");
    try {
        if (spec.contains("random")) {
            const auto& r = spec["random"];
            Rng rng(r.value("seed", 1ULL));
            return MobiusMap::random(n, rng, r.value("steps", 4), r.value("inversion", true));
        }
        MobiusMap map = MobiusMap::identity(n);
        if (!spec.contains("steps"))
            return map;
        if (!spec["steps"].is_array())
            throw ConfigError("Möbius steps must be a list");
        for (const auto& s : spec["steps"])
            map = map.then(step_from_json(s, n));
        return map;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("Möbius map: ") + e.what());
    }
}

} // namespace confcoord::conformalmaps
