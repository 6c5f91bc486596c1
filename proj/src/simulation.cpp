#include "mixtest/simulation.hpp"

#include <cmath>
#include <numeric>

#include "mixtest/errors.hpp"
#include "mixtest/normal.hpp"

namespace mixtest {

ComponentDist::ComponentDist(Kind kind, double a, double b)
    : kind_(kind), a_(a), b_(b) {}

ComponentDist ComponentDist::normal(double mean, double variance) {
    if (variance <= 0.0) throw InvalidParam("ComponentDist: variance must be positive");
    return ComponentDist(Kind::Normal, mean, variance);
}

ComponentDist ComponentDist::uniform(double lo, double hi) {
    if (lo >= hi) throw InvalidParam("ComponentDist: lo must be below hi");
    return ComponentDist(Kind::Uniform, lo, hi);
}

double ComponentDist::density(double x) const {
    switch (kind_) {
        case Kind::Normal: {
            const double sd = std::sqrt(b_);
            return normal_pdf((x - a_) / sd) / sd;
        }
        case Kind::Uniform:
            return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0;
    }
    return 0.0;
}

double ComponentDist::sample(Rng& rng) const {
    const double u = rng.uniform();
    switch (kind_) {
        case Kind::Normal:
            return a_ + std::sqrt(b_) * normal_quantile(u);
        case Kind::Uniform:
            return a_ + u * (b_ - a_);
    }
    return 0.0;
}

double ComponentDist::mean() const {
    return kind_ == Kind::Normal ? a_ : 0.5 * (a_ + b_);
}

double ComponentDist::l2_norm() const {
    switch (kind_) {
        case Kind::Normal:
            // integral of the squared density is 1 / (2 sigma sqrt(pi))
            return 1.0 / std::sqrt(2.0 * std::sqrt(b_ * M_PI));
        case Kind::Uniform:
            return 1.0 / std::sqrt(b_ - a_);
    }
    return 0.0;
}

double ComponentDist::sup_norm() const {
    switch (kind_) {
        case Kind::Normal:
            return 1.0 / std::sqrt(2.0 * M_PI * b_);
        case Kind::Uniform:
            return 1.0 / (b_ - a_);
    }
    return 0.0;
}

namespace {

WeightMatrix expand_blocks(const std::vector<WeightBlock>& blocks, int m, int n) {
    double total = 0.0;
    for (const auto& block : blocks) {
        if (static_cast<int>(block.weights.size()) != m) {
            throw InvalidParam("expand_weights: block dimension does not match M");
        }
        total += block.fraction;
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        throw InvalidParam("expand_weights: block fractions must sum to 1");
    }

    Eigen::MatrixXd entries(m, n);
    int col = 0;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        int count = static_cast<int>(std::floor(blocks[bi].fraction * n));
        if (bi + 1 == blocks.size()) count = n - col;  // last block absorbs remainder
        if (count <= 0) {
            throw InvalidParam("expand_weights: block resolves to zero columns");
        }
        for (int c = 0; c < count; ++c, ++col) {
            for (int u = 0; u < m; ++u) entries(u, col) = blocks[bi].weights[u];
        }
    }
    return WeightMatrix(std::move(entries));
}

}  // namespace

std::pair<WeightMatrix, WeightMatrix> expand_weights(const MixtureSpec& spec, int n) {
    const int m = spec.components();
    if (m < 1 || static_cast<int>(spec.components_q.size()) != m) {
        throw InvalidParam("expand_weights: inconsistent component lists");
    }
    return {expand_blocks(spec.y_blocks, m, n), expand_blocks(spec.z_blocks, m, n)};
}

PairedSample sample_mixture(const MixtureSpec& spec, int n, std::uint64_t seed) {
    auto [omega, sigma] = expand_weights(spec, n);
    Rng rng(seed);
    const int m = spec.components();

    auto draw = [&](const Eigen::MatrixXd& weights,
                    const std::vector<ComponentDist>& components, int i) {
        const double u = rng.uniform();
        double cum = 0.0;
        int pick = m - 1;
        for (int c = 0; c < m; ++c) {
            cum += weights(c, i);
            if (u < cum) {
                pick = c;
                break;
            }
        }
        return components[pick].sample(rng);
    };

    std::vector<double> y(n), z(n);
    for (int i = 0; i < n; ++i) y[i] = draw(omega.entries(), spec.components_p, i);
    for (int i = 0; i < n; ++i) z[i] = draw(sigma.entries(), spec.components_q, i);
    return PairedSample(std::move(y), std::move(z), std::move(omega), std::move(sigma));
}

const std::map<std::string, MixtureSpec>& builtin_models() {
    static const std::map<std::string, MixtureSpec> registry = [] {
        std::map<std::string, MixtureSpec> models;

        const auto n_m2_1 = ComponentDist::normal(-2.0, 1.0);
        const auto n_3_4 = ComponentDist::normal(3.0, 4.0);
        const auto n_0_1 = ComponentDist::normal(0.0, 1.0);
        const auto n_1_1 = ComponentDist::normal(1.0, 1.0);

        const std::vector<WeightBlock> y1{{0.8, {0.6, 0.4}}, {0.2, {0.4, 0.6}}};
        const std::vector<WeightBlock> z1{{0.3, {0.2, 0.8}}, {0.7, {0.5, 0.5}}};
        const std::vector<WeightBlock> y2{{0.8, {0.8, 0.2}}, {0.2, {0.3, 0.7}}};
        const std::vector<WeightBlock> z2{{0.3, {0.1, 0.9}}, {0.7, {0.4, 0.6}}};
        const std::vector<WeightBlock> z3{{0.3, {0.9, 0.1}}, {0.7, {0.3, 0.7}}};

        const std::vector<ComponentDist> h0{n_m2_1, n_3_4};
        const std::vector<ComponentDist> h1{n_0_1, n_1_1};

        auto gaussian_model = [&](const std::vector<WeightBlock>& yb,
                                  const std::vector<WeightBlock>& zb,
                                  const std::vector<ComponentDist>& q) {
            MixtureSpec spec;
            spec.components_p = h0;
            spec.components_q = q;
            spec.y_blocks = yb;
            spec.z_blocks = zb;
            return spec;
        };

        models.emplace("model1_h0", gaussian_model(y1, z1, h0));
        models.emplace("model1_h1", gaussian_model(y1, z1, h1));
        models.emplace("model2_h0", gaussian_model(y2, z2, h0));
        models.emplace("model2_h1", gaussian_model(y2, z2, h1));
        models.emplace("model3_h0", gaussian_model(y2, z3, h0));
        models.emplace("model3_h1", gaussian_model(y2, z3, h1));

        // Two-component illustration: uniform on [-1,0] plus N(3,4).
        {
            MixtureSpec spec;
            spec.components_p = {ComponentDist::uniform(-1.0, 0.0), n_3_4};
            spec.components_q = spec.components_p;
            spec.y_blocks = {{0.5, {0.7, 0.3}}, {0.5, {0.3, 0.7}}};
            spec.z_blocks = {{0.5, {0.2, 0.8}}, {0.5, {0.6, 0.4}}};
            models.emplace("example_2comp", spec);
        }

        // Three-component illustration: N(-2,1), N(0,1), N(2,1).
        {
            MixtureSpec spec;
            spec.components_p = {n_m2_1, n_0_1, ComponentDist::normal(2.0, 1.0)};
            spec.components_q = spec.components_p;
            spec.y_blocks = {{0.4, {0.6, 0.3, 0.1}},
                             {0.3, {0.2, 0.5, 0.3}},
                             {0.3, {0.1, 0.2, 0.7}}};
            spec.z_blocks = {{0.3, {0.1, 0.6, 0.3}},
                             {0.4, {0.5, 0.2, 0.3}},
                             {0.3, {0.3, 0.3, 0.4}}};
            models.emplace("example_3comp", spec);
        }

        return models;
    }();
    return registry;
}

double AdversarialAlternative::perturbation(double z) const {
    double sum = 0.0;
    for (std::size_t t = 0; t < translate_set.size(); ++t) {
        sum += signs[t] * eval_psi_jk(basis, {level, translate_set[t]}, z);
    }
    return bump_scale * sum;
}

double AdversarialAlternative::density(int component, double z) const {
    return base[component].density(z) + theta(component) * perturbation(z);
}

double AdversarialAlternative::closed_form_l2_sq(int component) const {
    const double t = static_cast<double>(translate_set.size());
    const double l = basis.half_support();
    const double m = static_cast<double>(base.size());
    const double th = theta(component);
    return t * l * m * separation * separation *
           std::pow(2.0, 2.0 + 2.0 * smoothness -
                             2.0 * level * smoothness - level) *
           th * th;
}

CoefficientArray AdversarialAlternative::perturbation_coefficients(int component) const {
    CoefficientArray coeffs;
    for (std::size_t t = 0; t < translate_set.size(); ++t) {
        coeffs.set(level, translate_set[t],
                   theta(component) * bump_scale * signs[t]);
    }
    return coeffs;
}

AdversarialAlternative adversarial_alternative(
    const std::vector<ComponentDist>& components, const WeightMatrix& sigma,
    double c, double s, int n, const ScalingBasis& basis, std::uint64_t seed,
    double radius, double density_floor) {
    const int m = static_cast<int>(components.size());
    if (m != sigma.components()) {
        throw DimensionMismatch("adversarial_alternative: component count mismatch");
    }
    if (c <= 0.0 ||
        c >= std::sqrt(radius / (m * std::pow(2.0, 2.0 * s + 2.0)))) {
        throw InvalidParam(
            "adversarial_alternative: C must lie in (0, sqrt(R / (M 2^{2s+2})))");
    }

    const RateParams rate = select_level(n, s);
    const int j = rate.level;
    const double l = basis.half_support();

    AdversarialAlternative out{
        .base = components,
        .theta = Eigen::VectorXd(),
        .translate_set = {},
        .signs = {},
        .level = j,
        .bump_scale = 0.0,
        .separation = c,
        .smoothness = s,
        .basis = basis,
    };

    // Unit eigenvector for the smallest eigenvalue of Sigma Sigma^T, first
    // nonzero coordinate positive so the construction is deterministic.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma.entries() *
                                                          sigma.entries().transpose());
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("adversarial_alternative: eigensolver failed");
    }
    out.theta = solver.eigenvectors().col(0);
    for (int i = 0; i < m; ++i) {
        if (out.theta(i) != 0.0) {
            if (out.theta(i) < 0.0) out.theta = -out.theta;
            break;
        }
    }

    // Disjoint support intervals inside [0,1): k, k + 2L, k + 4L, ...
    const long step = 2 * static_cast<long>(std::ceil(l));
    const long count = static_cast<long>(std::floor(std::ldexp(1.0, j - 1) / l));
    if (count < 1) {
        throw InvalidParam("adversarial_alternative: no bump fits at this level (n too small)");
    }
    const long first = static_cast<long>(std::ceil(l));
    for (long t = 0; t < count; ++t) out.translate_set.push_back(first + step * t);

    Rng rng(seed);
    out.signs.resize(out.translate_set.size());
    for (auto& sign : out.signs) sign = (rng.uniform() < 0.5) ? -1 : 1;

    out.bump_scale = std::pow(2.0, s + 1.0) * c * std::sqrt(m * l) *
                     std::pow(2.0, -j * s - 0.5 * j);

    // Verification grid over [0,1): the perturbed densities must stay
    // nonnegative, and the base components must respect the stated floor.
    const long grid = 1L << std::min(j + 6, 24);
    for (long g = 0; g < grid; ++g) {
        const double z = (g + 0.5) / static_cast<double>(grid);
        for (int comp = 0; comp < m; ++comp) {
            if (density_floor > 0.0 && components[comp].density(z) < density_floor) {
                throw InvalidParam(
                    "adversarial_alternative: base density below the stated floor on [0,1)");
            }
            if (out.density(comp, z) < 0.0) {
                throw InvalidParam(
                    "adversarial_alternative: perturbed density goes negative (n too small)");
            }
        }
    }
    return out;
}

}  // namespace mixtest
