#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "deaos/random.hpp"

namespace deaos::bench {

/// Ids of the implemented functions; at least two per difficulty class
/// (separable, low/moderate conditioning, high conditioning, multimodal with
/// adequate structure, multimodal with weak structure).
inline const std::vector<int>& implemented_functions() {
    static const std::vector<int> ids = {1, 2, 3, 5, 6, 8, 10, 12, 15, 17, 21, 24};
    return ids;
}

namespace detail {

/// Irregular oscillation applied coordinate-wise.
inline double t_osz(double x) {
    if (x == 0.0)
        return 0.0;
    const double xhat = std::log(std::abs(x));
    const double c1 = x > 0.0 ? 10.0 : 5.5;
    const double c2 = x > 0.0 ? 7.9 : 3.1;
    const double sign = x > 0.0 ? 1.0 : -1.0;
    return sign * std::exp(xhat + 0.049 * (std::sin(c1 * xhat) + std::sin(c2 * xhat)));
}

inline void t_osz(std::vector<double>& z) {
    for (double& v : z)
        v = t_osz(v);
}

/// Symmetry-breaking transformation; exponent grows along the coordinates.
inline void t_asy(std::vector<double>& z, double beta) {
    const std::size_t d = z.size();
    for (std::size_t i = 0; i < d; ++i) {
        if (z[i] <= 0.0)
            continue;
        const double expo =
            1.0 + beta * (d > 1 ? static_cast<double>(i) / static_cast<double>(d - 1) : 0.0) *
                      std::sqrt(z[i]);
        z[i] = std::pow(z[i], expo);
    }
}

/// Diagonal conditioning matrix Lambda^alpha applied in place.
inline void lambda_scale(std::vector<double>& z, double alpha) {
    const std::size_t d = z.size();
    for (std::size_t i = 0; i < d; ++i) {
        const double expo =
            d > 1 ? 0.5 * static_cast<double>(i) / static_cast<double>(d - 1) : 0.0;
        z[i] *= std::pow(alpha, expo);
    }
}

/// Quadratic penalty for leaving the [-5, 5] box; zero inside.
inline double boundary_penalty(std::span<const double> x) {
    double pen = 0.0;
    for (double v : x) {
        const double excess = std::abs(v) - 5.0;
        if (excess > 0.0)
            pen += excess * excess;
    }
    return pen;
}

/// Dense row-major orthogonal matrix drawn from the seeded stream
/// (Gram-Schmidt on a Gaussian matrix, stabilised by a second pass).
inline std::vector<double> random_rotation(std::size_t d, RandomStream& rng) {
    std::vector<double> m(d * d);
    for (double& v : m)
        v = rng.gaussian();
    for (std::size_t col = 0; col < d; ++col) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t prev = 0; prev < col; ++prev) {
                double dot = 0.0;
                for (std::size_t row = 0; row < d; ++row)
                    dot += m[row * d + col] * m[row * d + prev];
                for (std::size_t row = 0; row < d; ++row)
                    m[row * d + col] -= dot * m[row * d + prev];
            }
        }
        double norm = 0.0;
        for (std::size_t row = 0; row < d; ++row)
            norm += m[row * d + col] * m[row * d + col];
        norm = std::sqrt(norm);
        if (norm == 0.0)
            throw std::runtime_error("random_rotation: degenerate column");
        for (std::size_t row = 0; row < d; ++row)
            m[row * d + col] /= norm;
    }
    return m;
}

inline std::vector<double> apply(const std::vector<double>& m, std::span<const double> v) {
    const std::size_t d = v.size();
    std::vector<double> out(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            out[i] += m[i * d + j] * v[j];
    return out;
}

struct GallagherPeak {
    std::vector<double> centre;
    double weight = 0.0;
    std::vector<double> scaling; // diagonal of C_i in the rotated frame
};

} // namespace detail

/// One benchmark instance: a translated (and for the non-separable functions
/// rotated) variant of a base function, minimised over [-5, 5]^dim with known
/// optimum. Instances are derived deterministically from (function, instance).
class Problem {
  public:
    Problem(int function_id, int instance_id, std::size_t dim);

    double evaluate(std::span<const double> x) const;

    int function_id() const { return function_id_; }
    int instance_id() const { return instance_id_; }
    std::size_t dim() const { return dim_; }
    double lower() const { return -5.0; }
    double upper() const { return 5.0; }
    double f_opt() const { return f_opt_; }
    const std::vector<double>& x_opt() const { return x_opt_; }
    const std::vector<double>& rotation() const { return rot_; }

  private:
    double raw(std::span<const double> x) const;

    int function_id_;
    int instance_id_;
    std::size_t dim_;
    std::vector<double> x_opt_;
    double f_opt_ = 0.0;
    std::vector<double> rot_;  // R
    std::vector<double> rot2_; // Q, second rotation where the definition uses one
    std::vector<detail::GallagherPeak> peaks_;
    double lunacek_s_ = 0.0;
    double lunacek_mu1_ = 0.0;
};

inline Problem make_problem(int fid, int iid, std::size_t dim) { return Problem(fid, iid, dim); }

inline Problem::Problem(int function_id, int instance_id, std::size_t dim)
    : function_id_(function_id), instance_id_(instance_id), dim_(dim) {
    const auto& ids = implemented_functions();
    if (std::find(ids.begin(), ids.end(), function_id) == ids.end()) {
        std::string msg = "unsupported function id " + std::to_string(function_id) +
                          "; available:";
        for (int id : ids)
            msg += " " + std::to_string(id);
        throw std::invalid_argument(msg);
    }
    if (dim < 2)
        throw std::invalid_argument("make_problem: dimension must be >= 2");
    if (instance_id < 1)
        throw std::invalid_argument("make_problem: instance id must be >= 1");

    RandomStream rng(mix_seed(0xb0bu, static_cast<std::uint64_t>(function_id),
                              static_cast<std::uint64_t>(instance_id)));
    // Optimum location. Most functions draw it well inside the box; the
    // linear slope pins it to the boundary corners and the bi-Rastrigin
    // construction fixes the magnitude at 2.5 / 2.
    x_opt_.resize(dim);
    switch (function_id) {
    case 5:
        for (double& v : x_opt_)
            v = rng.uniform01() < 0.5 ? -5.0 : 5.0;
        break;
    case 8:
        for (double& v : x_opt_)
            v = rng.uniform_real(-3.0, 3.0);
        break;
    case 24:
        for (double& v : x_opt_)
            v = rng.uniform01() < 0.5 ? -1.25 : 1.25;
        break;
    default:
        for (double& v : x_opt_)
            v = rng.uniform_real(-4.0, 4.0);
        break;
    }
    f_opt_ = rng.uniform_real(-100.0, 100.0);

    const bool needs_rot =
        function_id == 6 || function_id == 10 || function_id == 12 || function_id == 15 ||
        function_id == 17 || function_id == 21 || function_id == 24;
    const bool needs_rot2 =
        function_id == 6 || function_id == 15 || function_id == 17 || function_id == 24;
    if (needs_rot)
        rot_ = detail::random_rotation(dim, rng);
    if (needs_rot2)
        rot2_ = detail::random_rotation(dim, rng);

    if (function_id == 21) {
        // 101 Gaussian peaks; the first is the global optimum with weight 10
        // and condition 1000, the rest draw weights in [1.1, 8.9] and
        // conditions from a shuffled geometric ladder.
        std::vector<double> ladder(100);
        for (std::size_t i = 0; i < 100; ++i)
            ladder[i] = std::pow(1000.0, 2.0 * static_cast<double>(i) / 99.0);
        for (std::size_t i = ladder.size(); i-- > 1;)
            std::swap(ladder[i], ladder[rng.uniform_index(i + 1)]);
        peaks_.resize(101);
        for (std::size_t p = 0; p < 101; ++p) {
            auto& peak = peaks_[p];
            peak.centre.resize(dim);
            if (p == 0) {
                peak.centre = x_opt_;
                peak.weight = 10.0;
            } else {
                for (double& v : peak.centre)
                    v = rng.uniform_real(-4.9, 4.9);
                peak.weight = 1.1 + 8.0 * static_cast<double>(p - 1) / 99.0;
            }
            const double alpha = p == 0 ? 1000.0 : ladder[p - 1];
            peak.scaling.resize(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                const double expo =
                    dim > 1 ? static_cast<double>(i) / (2.0 * static_cast<double>(dim - 1))
                            : 0.0;
                peak.scaling[i] = std::pow(alpha, expo) / std::pow(alpha, 0.25);
            }
        }
    }
    if (function_id == 24) {
        const double d = static_cast<double>(dim);
        lunacek_s_ = 1.0 - 1.0 / (2.0 * std::sqrt(d + 20.0) - 8.2);
        lunacek_mu1_ = -std::sqrt((2.5 * 2.5 - 1.0) / lunacek_s_);
    }
}

inline double Problem::evaluate(std::span<const double> x) const {
    if (x.size() != dim_)
        throw std::invalid_argument("evaluate: dimension mismatch");
    return f_opt_ + raw(x);
}

inline double Problem::raw(std::span<const double> x) const {
    const std::size_t d = dim_;
    std::vector<double> z(d);
    for (std::size_t i = 0; i < d; ++i)
        z[i] = x[i] - x_opt_[i];

    switch (function_id_) {
    case 1: { // sphere
        double sum = 0.0;
        for (double v : z)
            sum += v * v;
        return sum;
    }
    case 2: { // separable ellipsoid, condition 1e6
        detail::t_osz(z);
        double sum = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double expo = d > 1 ? 6.0 * static_cast<double>(i) / static_cast<double>(d - 1)
                                      : 0.0;
            sum += std::pow(10.0, expo) * z[i] * z[i];
        }
        return sum;
    }
    case 3: { // separable Rastrigin
        detail::t_osz(z);
        detail::t_asy(z, 0.2);
        detail::lambda_scale(z, 10.0);
        double cosine = 0.0;
        double sq = 0.0;
        for (double v : z) {
            cosine += std::cos(2.0 * 3.141592653589793238462643 * v);
            sq += v * v;
        }
        return 10.0 * (static_cast<double>(d) - cosine) + sq;
    }
    case 5: { // linear slope; optimum sits on the boundary
        double sum = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double expo =
                d > 1 ? static_cast<double>(i) / static_cast<double>(d - 1) : 0.0;
            const double s = (x_opt_[i] > 0.0 ? 1.0 : -1.0) * std::pow(10.0, expo);
            const double zi = x[i] * x_opt_[i] < 25.0 ? x[i] : x_opt_[i];
            sum += 5.0 * std::abs(s) - s * zi;
        }
        return sum;
    }
    case 6: { // attractive sector
        z = detail::apply(rot_, z);
        detail::lambda_scale(z, 10.0);
        z = detail::apply(rot2_, z);
        double sum = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double s = z[i] * x_opt_[i] > 0.0 ? 100.0 : 1.0;
            sum += s * z[i] * s * z[i];
        }
        return std::pow(detail::t_osz(sum), 0.9);
    }
    case 8: { // Rosenbrock, original frame
        const double scale = std::max(1.0, std::sqrt(static_cast<double>(d)) / 8.0);
        for (double& v : z)
            v = scale * v + 1.0;
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < d; ++i) {
            const double a = z[i] * z[i] - z[i + 1];
            const double b = z[i] - 1.0;
            sum += 100.0 * a * a + b * b;
        }
        return sum;
    }
    case 10: { // rotated ellipsoid
        z = detail::apply(rot_, z);
        detail::t_osz(z);
        double sum = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double expo = d > 1 ? 6.0 * static_cast<double>(i) / static_cast<double>(d - 1)
                                      : 0.0;
            sum += std::pow(10.0, expo) * z[i] * z[i];
        }
        return sum;
    }
    case 12: { // bent cigar
        z = detail::apply(rot_, z);
        detail::t_asy(z, 0.5);
        z = detail::apply(rot_, z);
        double sum = z[0] * z[0];
        for (std::size_t i = 1; i < d; ++i)
            sum += 1e6 * z[i] * z[i];
        return sum;
    }
    case 15: { // rotated Rastrigin
        z = detail::apply(rot_, z);
        detail::t_osz(z);
        detail::t_asy(z, 0.2);
        z = detail::apply(rot2_, z);
        detail::lambda_scale(z, 10.0);
        z = detail::apply(rot_, z);
        double cosine = 0.0;
        double sq = 0.0;
        for (double v : z) {
            cosine += std::cos(2.0 * 3.141592653589793238462643 * v);
            sq += v * v;
        }
        return 10.0 * (static_cast<double>(d) - cosine) + sq;
    }
    case 17: { // Schaffers F7
        z = detail::apply(rot_, z);
        detail::t_asy(z, 0.5);
        z = detail::apply(rot2_, z);
        detail::lambda_scale(z, 10.0);
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < d; ++i) {
            const double s = std::sqrt(z[i] * z[i] + z[i + 1] * z[i + 1]);
            const double term = std::sin(50.0 * std::pow(s, 0.2));
            sum += std::sqrt(s) * (1.0 + term * term);
        }
        sum /= static_cast<double>(d - 1);
        return sum * sum + 10.0 * detail::boundary_penalty(x);
    }
    case 21: { // Gallagher's 101 peaks
        double best = 0.0;
        for (const auto& peak : peaks_) {
            std::vector<double> w(d);
            for (std::size_t i = 0; i < d; ++i)
                w[i] = x[i] - peak.centre[i];
            const auto rw = detail::apply(rot_, w);
            double quad = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                quad += peak.scaling[i] * rw[i] * rw[i];
            const double value =
                peak.weight * std::exp(-quad / (2.0 * static_cast<double>(d)));
            best = std::max(best, value);
        }
        const double t = detail::t_osz(10.0 - best);
        return t * t + detail::boundary_penalty(x);
    }
    case 24: { // Lunacek bi-Rastrigin
        const double mu0 = 2.5;
        std::vector<double> xhat(d);
        for (std::size_t i = 0; i < d; ++i)
            xhat[i] = 2.0 * (x_opt_[i] > 0.0 ? 1.0 : -1.0) * x[i];
        double sum0 = 0.0;
        double sum1 = 0.0;
        for (double v : xhat) {
            sum0 += (v - mu0) * (v - mu0);
            sum1 += (v - lunacek_mu1_) * (v - lunacek_mu1_);
        }
        std::vector<double> shifted(d);
        for (std::size_t i = 0; i < d; ++i)
            shifted[i] = xhat[i] - mu0;
        auto zz = detail::apply(rot_, shifted);
        detail::lambda_scale(zz, 10.0);
        zz = detail::apply(rot2_, zz);
        double cosine = 0.0;
        for (double v : zz)
            cosine += std::cos(2.0 * 3.141592653589793238462643 * v);
        const double dd = static_cast<double>(d);
        const double core = std::min(sum0, dd + lunacek_s_ * sum1);
        return core + 10.0 * (dd - cosine) + 1e4 * detail::boundary_penalty(x);
    }
    default:
        throw std::logic_error("Problem::raw: unreachable function id");
    }
}

/// Fitness scaled by a positive constant; used to check invariance of the
/// rank-based credit under linear scaling of the objective.
class ScaledProblem {
  public:
    ScaledProblem(const Problem& base, double factor) : base_(base), factor_(factor) {
        if (factor <= 0.0)
            throw std::invalid_argument("ScaledProblem: factor must be positive");
    }
    double evaluate(std::span<const double> x) const { return factor_ * base_.evaluate(x); }
    std::size_t dim() const { return base_.dim(); }
    double lower() const { return base_.lower(); }
    double upper() const { return base_.upper(); }
    double f_opt() const { return factor_ * base_.f_opt(); }

  private:
    const Problem& base_;
    double factor_;
};

// ---------------------------------------------------------------------------
// Problem-set manifests: JSON lists of {function_id, instance_id, dim} that
// define training and test suites.

struct ProblemSpec {
    int function_id = 1;
    int instance_id = 1;
    int dim = 5;
};

inline nlohmann::ordered_json manifest_to_json(std::span<const ProblemSpec> specs) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : specs)
        arr.push_back({{"function_id", s.function_id},
                       {"instance_id", s.instance_id},
                       {"dim", s.dim}});
    return arr;
}

inline std::vector<ProblemSpec> manifest_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_array())
        throw std::invalid_argument("manifest: expected a JSON array");
    std::vector<ProblemSpec> specs;
    for (const auto& item : j) {
        for (const auto& kv : item.items())
            if (kv.key() != "function_id" && kv.key() != "instance_id" && kv.key() != "dim")
                throw std::invalid_argument("manifest: unknown key '" + kv.key() + "'");
        ProblemSpec s;
        s.function_id = item.at("function_id").get<int>();
        s.instance_id = item.at("instance_id").get<int>();
        s.dim = item.at("dim").get<int>();
        specs.push_back(s);
    }
    return specs;
}

inline std::vector<ProblemSpec> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open manifest file: " + path);
    nlohmann::ordered_json j;
    in >> j;
    return manifest_from_json(j);
}

} // namespace deaos::bench
