#include "kloptim/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "kloptim/errors.hpp"
#include "kloptim/rng.hpp"

namespace kloptim {

namespace {

struct Params {
    std::map<std::string, std::string> kv;

    double num(const std::string& key, double fallback) const {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        try {
            return std::stod(it->second);
        } catch (...) {
            throw InputError("zoo: parameter '" + key + "' is not a number: " + it->second);
        }
    }
    std::size_t integer(const std::string& key, std::size_t fallback) const {
        const double v = num(key, static_cast<double>(fallback));
        if (v < 1 || v != std::floor(v))
            throw InputError("zoo: parameter '" + key + "' must be a positive integer");
        return static_cast<std::size_t>(v);
    }
    std::string str(const std::string& key, const std::string& fallback) const {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    }
    void restrict_keys(std::initializer_list<const char*> allowed,
                       const std::string& family) const {
        for (const auto& [k, v] : kv) {
            if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
                    return k == a;
                }) == allowed.end())
                throw InputError("zoo: unknown parameter '" + k + "' for family " + family);
        }
    }
};

Params parse_params(const std::string& family, const std::string& rest) {
    Params p;
    if (rest.empty()) return p;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
            // bare aliases
            if (family == "saddle" && tok == "2d") {
                p.kv["d"] = "2";
            } else if (family == "bilinear" && tok == "1d") {
                p.kv["dx"] = "1";
                p.kv["dy"] = "1";
                p.kv["a"] = "unit";
            } else if (family == "bilinear" && tok == "decoupled") {
                p.kv["a"] = "zero";
                p.kv["ridge"] = "0.5";
            } else {
                throw InputError("zoo: cannot parse token '" + tok + "' in problem id");
            }
        } else {
            p.kv[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
    }
    return p;
}

ProxOperator parse_g(const std::string& s) {
    if (s == "none") return ProxOperator::zero();
    if (s.rfind("l1:", 0) == 0) return ProxOperator::l1(std::stod(s.substr(3)));
    if (s.rfind("sql2:", 0) == 0) return ProxOperator::squared_l2(std::stod(s.substr(5)));
    throw InputError("zoo: bad regularizer spec '" + s + "' (none | l1:<w> | sql2:<w>)");
}

std::string num_str(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

Problem resolve_problem(const std::string& id, std::uint64_t seed) {
    const auto colon = id.find(':');
    const std::string family = id.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : id.substr(colon + 1);
    const Params p = parse_params(family, rest);
    Rng rng(seed);

    Problem prob;

    if (family.rfind("power", 0) == 0) {
        const std::string suffix = family.substr(5);
        if (suffix != "2" && suffix != "3" && suffix != "4" && suffix != "6")
            throw InputError("zoo: unknown family '" + family + "'");
        p.restrict_keys({"d", "scale", "x0"}, family);
        const double pw = std::stod(suffix);
        const std::size_t d = p.integer("d", 2);
        const double scale = p.num("scale", 1.0);
        const double x0n = p.num("x0", 1.0);
        const double radius = 2.0 * x0n + 1.0;
        prob.smooth = make_power_norm(d, pw, scale, radius);
        prob.x0 = scaled(rng.unit_vec(d), x0n);
        prob.id = family + ":d=" + std::to_string(d) + ",scale=" + num_str(scale) +
                  ",x0=" + num_str(x0n);
    } else if (family == "quad") {
        p.restrict_keys({"d", "cond", "x0"}, family);
        const std::size_t d = p.integer("d", 10);
        const double cond = p.num("cond", 10.0);
        if (cond < 1.0) throw InputError("zoo: quad cond must be >= 1");
        const double x0n = p.num("x0", 3.0);
        // eigenvalues log-spaced on [1, cond] in a seeded orthogonal basis
        const auto U = rng.orthogonal(d);
        Vec eigs(d);
        for (std::size_t i = 0; i < d; ++i)
            eigs[i] = d == 1 ? 1.0
                             : std::exp(std::log(cond) * static_cast<double>(i) /
                                        static_cast<double>(d - 1));
        SymMatrix Q(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < d; ++k)
                    s += U[i * d + k] * eigs[k] * U[j * d + k];
                Q.set(i, j, s);
            }
        const Vec x_star = scaled(rng.unit_vec(d), 3.0);
        const Vec b = Q.multiply(x_star);
        prob.smooth = make_quadratic(Q, b);
        prob.x0 = add(x_star, scaled(rng.unit_vec(d), x0n));
        prob.id = "quad:d=" + std::to_string(d) + ",cond=" + num_str(cond) +
                  ",x0=" + num_str(x0n);
    } else if (family == "saddle") {
        p.restrict_keys({"d", "gamma", "x0"}, family);
        const std::size_t d = p.integer("d", 2);
        if (d < 2) throw InputError("zoo: saddle needs d >= 2");
        const double gamma = p.num("gamma", 1.0);
        const double x0n = p.num("x0", 0.1);
        Vec diag(d);
        diag[0] = -1.0;
        for (std::size_t i = 1; i < d; ++i) diag[i] = static_cast<double>(i);
        prob.smooth = make_saddle_confined(SymMatrix::diagonal(diag), gamma);
        prob.x0 = scaled(rng.unit_vec(d), x0n);
        prob.id = "saddle:d=" + std::to_string(d) + ",gamma=" + num_str(gamma) +
                  ",x0=" + num_str(x0n);
    } else if (family == "bilinear") {
        p.restrict_keys({"dx", "dy", "mu", "ridge", "yr", "a", "g", "x0"}, family);
        const std::size_t dx = p.integer("dx", 1);
        const std::size_t dy = p.integer("dy", 1);
        const double mu = p.num("mu", 1.0);
        const double ridge = p.num("ridge", 0.0);
        const double yr = p.num("yr", 100.0);
        const double x0n = p.num("x0", 1.0);
        const std::string akind = p.str("a", dx == 1 && dy == 1 ? "unit" : "random");
        std::vector<double> A(dx * dy, 0.0);
        if (akind == "unit") {
            for (std::size_t i = 0; i < std::min(dx, dy); ++i) A[i * dy + i] = 1.0;
        } else if (akind == "random") {
            for (auto& v : A) v = rng.normal();
        } else if (akind != "zero") {
            throw InputError("zoo: bilinear a= must be unit | random | zero");
        }
        SymMatrix Dx;
        if (ridge != 0.0) {
            Dx = SymMatrix(dx);
            for (std::size_t i = 0; i < dx; ++i) Dx.set(i, i, ridge);
        }
        prob.minimax = make_bilinear_minimax(dx, dy, A, mu, Dx, parse_g(p.str("g", "none")), yr);
        prob.x0 = scaled(rng.unit_vec(dx), x0n);
        prob.y0 = Vec(dy, 0.0);
        prob.id = "bilinear:dx=" + std::to_string(dx) + ",dy=" + std::to_string(dy) +
                  ",mu=" + num_str(mu) + ",ridge=" + num_str(ridge) + ",a=" + akind +
                  ",g=" + p.str("g", "none") + ",x0=" + num_str(x0n);
    } else {
        throw InputError("zoo: unknown problem family '" + family +
                         "' (try: power2, power3, power4, power6, quad, saddle, bilinear)");
    }

    if (prob.smooth) {
        prob.minimax.reset();
        // 2*L2 keeps every monitor valid; for L2 = 0 any M > 0 does, and a
        // damped M = 20 leaves enough superlinear iterations to classify
        prob.default_M =
            prob.smooth->lipschitz_hess > 0.0 ? 2.0 * prob.smooth->lipschitz_hess : 20.0;
    }
    return prob;
}

std::vector<std::pair<std::string, std::string>> zoo_catalog() {
    return {
        {"power2|power3|power4|power6 [d=,scale=,x0=]",
         "f(x) = scale*||x||^p; f*=0, solution {0}, KL exponent 1/p"},
        {"quad [d=,cond=,x0=]",
         "seeded SPD quadratic with log-spaced spectrum on [1,cond]; KL exponent 1/2"},
        {"saddle [d=,gamma=,x0=] (alias saddle:2d)",
         "1/2 x^T D x + gamma/4 ||x||^4, strict saddle at 0, minima along the bottom "
         "eigendirection"},
        {"bilinear [dx=,dy=,mu=,ridge=,yr=,a=,g=,x0=] (aliases bilinear:1d, "
         "bilinear:decoupled)",
         "minimax 1/2 x^T Dx x + x^T A y - mu/2 ||y||^2 on a y-ball; exact y*(x)"},
    };
}

}  // namespace kloptim
