#include <doctest.h>

#include "test_helpers.hpp"

using namespace hyperwave;
using namespace hwtest;

namespace {

// Independent rendering of the entry density: weight and quadratic part
// recomputed from scratch, saturating part integrated from its derivative
// t(t+2)/(1+t)^2 by composite Simpson.
double energy_oracle(const EnergyEntry& e, const Coord& x, const Mat& y,
                     int d) {
    double tent = 1.0;
    for (int a = 0; a < d; ++a) {
        double s = std::abs(x[a] - e.weight.center[a]) / e.weight.halfwidth[a];
        tent *= std::max(0.0, 1.0 - s);
    }
    double phi = e.weight.floor + (1.0 - e.weight.floor) * tent;
    double r = 0.0, tr = 0.0, sym = 0.0;
    for (int i = 0; i < d; ++i) {
        tr += y(i, i);
        for (int j = 0; j < d; ++j) {
            r += y(i, j) * y(i, j);
            double s = 0.5 * (y(i, j) + y(j, i));
            sym += s * s;
        }
    }
    double q = e.a * r + e.b * tr * tr + e.c * sym;
    if (e.family == EnergyFamily::BoundedNonlinear && r > 0.0)
        q += e.nl * simpson(
                        [](double t) {
                            return t * (t + 2.0) / ((1.0 + t) * (1.0 + t));
                        },
                        0.0, r, 20000);
    return phi * q;
}

Mat fd_stress(const EnergyEntry& e, const Coord& x, const Mat& y, int d) {
    double delta = 5e-6 * std::max(1.0, std::sqrt(y.frob_sq()));
    Mat out;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Mat yp = y, ym = y;
            yp(i, j) += delta;
            ym(i, j) -= delta;
            out(i, j) =
                (e.energy(x, yp, d) - e.energy(x, ym, d)) / (2.0 * delta);
        }
    return out;
}

std::vector<EnergyEntry> builtin_entries(int d) {
    return {
        quadratic_entry(1.0, 0.0, 0.0, SpatialWeight::uniform(), d),
        quadratic_entry(1.0, 0.5, 0.25,
                        bump(0.3, {0.4, 0.4, 0.4}, {0.3, 0.3, 0.3}), d),
        nonlinear_entry(1.0, 0.5, bump(0.2, {0.6, 0.5, 0.5}, {0.35, 0.4, 0.4}),
                        d),
        nonlinear_entry(1.2, 0.3, SpatialWeight::uniform(), d, 13, 0.3, 0.1),
    };
}

}  // namespace

TEST_CASE("energy basics") {
    for (const EnergyEntry& e : builtin_entries(3)) {
        Coord x{0.3, 0.7, 0.5};
        CHECK(e.energy(x, Mat{}, 3) == 0.0);
        CHECK(e.stress(x, Mat{}, 3).frob_sq() == 0.0);
    }

    EnergyEntry plain = quadratic_entry(1.0, 0.0, 0.0);
    CHECK(plain.energy({0.5, 0.5, 0.5}, Mat::identity(3), 3) ==
          doctest::Approx(3.0).epsilon(1e-14));

    Mat bad;
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(plain.energy({0.1, 0.1, 0.1}, bad, 3), Error);
    CHECK_THROWS_AS(plain.stress({0.1, 0.1, 0.1}, bad, 3), Error);
}

TEST_CASE("energy matches independent quadrature oracle") {
    Rng rng(102);
    for (const EnergyEntry& e : builtin_entries(3)) {
        for (int t = 0; t < 10; ++t) {
            Coord x{rng.uniform(), rng.uniform(), rng.uniform()};
            Mat y = rng.random_mat(3, 1.5);
            double want = energy_oracle(e, x, y, 3);
            CHECK(rel_diff(e.energy(x, y, 3), want) <= 1e-10);
        }
    }
}

TEST_CASE("stress: closed form and finite differences") {
    EnergyEntry e = quadratic_entry(
        1.0, 0.0, 0.0, bump(0.4, {0.5, 0.5, 0.5}, {0.4, 0.4, 0.4}));
    Rng rng(103);
    Coord x{0.45, 0.6, 0.5};
    Mat y = rng.random_mat(3);
    double phi = e.weight(x, 3);
    Mat want = 2.0 * phi * y;
    CHECK(frob_rel_diff(e.stress(x, y, 3), want) <= 1e-14);

    for (const EnergyEntry& entry : builtin_entries(3)) {
        for (int t = 0; t < 5; ++t) {
            Coord xs{rng.uniform(), rng.uniform(), rng.uniform()};
            Mat ys = rng.random_mat(3, 1.2);
            CHECK(frob_rel_diff(entry.stress(xs, ys, 3),
                                fd_stress(entry, xs, ys, 3)) <= 1e-6);
        }
    }
}

TEST_CASE("hessian: quadratic form, symmetry, finite differences") {
    EnergyEntry plain = quadratic_entry(1.0, 0.0, 0.0);
    Rng rng(104);
    Coord x{0.2, 0.3, 0.4};
    Mat h = rng.random_mat(3);
    Tensor4 t = plain.hessian(x, rng.random_mat(3), 3);
    CHECK(rel_diff(ddot(h, t.contract(h, 3)), 2.0 * h.frob_sq()) <= 1e-13);

    for (const EnergyEntry& e : builtin_entries(3)) {
        Mat y = rng.random_mat(3, 1.4);
        Tensor4 hs = e.hessian(x, y, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l)
                        CHECK(hs(i, j, k, l) == hs(k, l, i, j));

        // contraction against central differences of the stress
        Mat dir = rng.random_mat(3);
        double delta = 4e-6;
        Mat yp = y, ym = y;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                yp(i, j) += delta * dir(i, j);
                ym(i, j) -= delta * dir(i, j);
            }
        Mat fd = e.stress(x, yp, 3) - e.stress(x, ym, 3);
        fd *= 1.0 / (2.0 * delta);
        CHECK(frob_rel_diff(hs.contract(dir, 3), fd) <= 1e-6);
    }
}

TEST_CASE("third derivative: zero on quadratic, bilinear, matches FD") {
    Rng rng(105);
    Coord x{0.5, 0.5, 0.5};
    EnergyEntry quad = quadratic_entry(1.0, 0.5, 0.25);
    Mat y = rng.random_mat(3), h1 = rng.random_mat(3), h2 = rng.random_mat(3);
    CHECK(quad.third_derivative(x, y, h1, h2, 3).frob_sq() == 0.0);

    EnergyEntry bn = nonlinear_entry(1.0, 0.5);
    Mat scaled = bn.third_derivative(x, y, 2.0 * h1, h2, 3);
    Mat twice = 2.0 * bn.third_derivative(x, y, h1, h2, 3);
    CHECK(frob_rel_diff(scaled, twice) <= 1e-13);

    // FD of the hessian contraction in direction h1
    double delta = 2e-5;
    Mat yp = y, ym = y;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            yp(i, j) += delta * h1(i, j);
            ym(i, j) -= delta * h1(i, j);
        }
    Mat fd = bn.hessian(x, yp, 3).contract(h2, 3) -
             bn.hessian(x, ym, 3).contract(h2, 3);
    fd *= 1.0 / (2.0 * delta);
    CHECK(frob_rel_diff(bn.third_derivative(x, y, h1, h2, 3), fd) <= 1e-5);
}

TEST_CASE("combine: unit vector, duplicated entries, summation oracle") {
    EnergyDictionary dict;
    dict.entries = builtin_entries(3);
    Rng rng(106);
    Coord x{0.3, 0.6, 0.2};
    Mat y = rng.random_mat(3);

    Coeffs e1(dict.entries.size(), 0.0);
    e1[0] = 1.0;
    CombinedEnergy first = combine(dict, e1);
    CHECK(rel_diff(first.energy(x, y, 3), dict.entries[0].energy(x, y, 3)) <=
          1e-15);

    EnergyDictionary twice;
    twice.entries = {dict.entries[0], dict.entries[0]};
    CombinedEnergy five = combine(twice, {2.0, 3.0});
    CHECK(rel_diff(five.energy(x, y, 3),
                   5.0 * dict.entries[0].energy(x, y, 3)) <= 1e-14);

    Coeffs alpha;
    for (std::size_t k = 0; k < dict.entries.size(); ++k)
        alpha.push_back(rng.uniform(0.1, 2.0));
    CombinedEnergy en = combine(dict, alpha);
    double want = 0.0;
    for (std::size_t k = 0; k < dict.entries.size(); ++k)
        want += alpha[k] * dict.entries[k].energy(x, y, 3);
    CHECK(rel_diff(en.energy(x, y, 3), want) <= 1e-13);

    CHECK_THROWS_AS(combine(dict, {1.0}), ShapeError);

    // linearity of the combination
    Coeffs beta;
    for (std::size_t k = 0; k < dict.entries.size(); ++k)
        beta.push_back(rng.uniform(0.1, 2.0));
    Coeffs mix(alpha.size());
    for (std::size_t k = 0; k < alpha.size(); ++k)
        mix[k] = 2.0 * alpha[k] + 0.5 * beta[k];
    double lhs = combine(dict, mix).energy(x, y, 3);
    double rhs = 2.0 * combine(dict, alpha).energy(x, y, 3) +
                 0.5 * combine(dict, beta).energy(x, y, 3);
    CHECK(rel_diff(lhs, rhs) <= 1e-12);
}

TEST_CASE("combined hessian bounds and the gap condition") {
    EnergyDictionary one;
    one.entries.push_back(quadratic_entry(1.0, 0.0, 0.0));
    one.entries[0].bounds.kappa[1] = 1.0;
    one.entries[0].bounds.mu[1] = 1.0;
    HessianBounds hb = hessian_bounds(one, {1.0});
    CHECK(hb.kappa == 1.0);
    CHECK(hb.mu == 1.0);
    CHECK(gap_condition_holds(one, {1.0}));  // kappa == mu sits inside the band

    EnergyDictionary dict;
    dict.entries = builtin_entries(3);
    Rng rng(107);
    Coeffs alpha;
    for (int k = 0; k < dict.size(); ++k)
        alpha.push_back(rng.uniform(0.1, 2.0));

    HessianBounds a = hessian_bounds(dict, alpha);
    double kap = 0.0, mu = 0.0;
    for (int k = 0; k < dict.size(); ++k) {
        kap += alpha[k] * dict.entries[k].bounds.kappa[1];
        mu += alpha[k] * dict.entries[k].bounds.mu[1];
    }
    CHECK(a.kappa == doctest::Approx(kap).epsilon(1e-15));
    CHECK(a.mu == doctest::Approx(mu).epsilon(1e-15));

    Coeffs doubled(alpha);
    for (double& v : doubled) v *= 2.0;
    HessianBounds b = hessian_bounds(dict, doubled);
    CHECK(b.kappa == 2.0 * a.kappa);  // power-of-two scaling is exact
    CHECK(b.mu == 2.0 * a.mu);
    CHECK(gap_condition_holds(dict, alpha) ==
          gap_condition_holds(dict, doubled));

    // kappa = 0.8 mu violates the lower bound of the band
    EnergyDictionary off;
    off.entries.push_back(one.entries[0]);
    off.entries[0].bounds.kappa[1] = 0.8;
    off.entries[0].bounds.mu[1] = 1.0;
    CHECK_FALSE(gap_condition_holds(off, {1.0}));
}

TEST_CASE("admissibility check lists every violated inequality") {
    EnergyDictionary dict;
    dict.entries = builtin_entries(3);
    AdmissibilityThresholds vacuous;
    vacuous.kappa = {0.0, 0.0};
    vacuous.mu.fill(1e12);

    Coeffs alpha(dict.entries.size(), 1.0);
    CHECK(check_admissible(dict, alpha, vacuous).ok);

    Coeffs zero_first = alpha;
    zero_first[0] = 0.0;
    AdmissibilityReport rep = check_admissible(dict, zero_first, vacuous);
    CHECK_FALSE(rep.ok);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0] == "positivity(1)");

    // random thresholds against a direct loop over all 2 + 7 inequalities
    Rng rng(108);
    for (int trial = 0; trial < 25; ++trial) {
        AdmissibilityThresholds thr;
        thr.kappa = {rng.uniform(0.0, 2.0), rng.uniform(0.0, 4.0)};
        for (int b = 0; b < 7; ++b) thr.mu[b] = rng.uniform(0.0, 30.0);
        Coeffs a;
        for (std::size_t k = 0; k < dict.entries.size(); ++k)
            a.push_back(rng.uniform(0.05, 2.0));
        bool want = true;
        for (int i = 0; i < 2; ++i) {
            double s = 0.0;
            for (int k = 0; k < dict.size(); ++k)
                s += a[k] * dict.entries[k].bounds.kappa[i];
            want = want && s >= thr.kappa[i];
        }
        for (int b = 0; b < 7; ++b) {
            double s = 0.0;
            for (int k = 0; k < dict.size(); ++k)
                s += a[k] * dict.entries[k].bounds.mu[b + 1];
            want = want && s <= thr.mu[b];
        }
        CHECK(check_admissible(dict, a, thr).ok == want);
    }
}

TEST_CASE("stability constants") {
    EnergyDictionary one;
    one.entries.push_back(with_exact_hessian_bounds(nonlinear_entry(1.0, 0.04), 3));
    StabilityConstants s1 = stability_constants(one, {1.0});
    StabilityConstants s2 = stability_constants(one, {3.5});
    CHECK(rel_diff(s1.c_bar, s2.c_bar) <= 1e-14);  // ratio of proportional sums
    CHECK(s1.c_bar == doctest::Approx(one.entries[0].bounds.mu[2] /
                                      one.entries[0].bounds.kappa[1]));

    EnergyDictionary dict;
    dict.entries = {
        with_exact_hessian_bounds(nonlinear_entry(1.0, 0.04), 3),
        with_exact_hessian_bounds(
            nonlinear_entry(1.3, 0.03, SpatialWeight::uniform(), 3, 21), 3)};
    Rng rng(109);
    for (int t = 0; t < 1000; ++t) {
        Coeffs a{rng.uniform(0.01, 5.0), rng.uniform(0.01, 5.0)};
        StabilityConstants sc = stability_constants(dict, a);
        CHECK(sc.zeta <= sc.c_bar + 1e-15);
        CHECK(sc.c_bar <= sc.eta + 1e-15);
    }

    // independent arithmetic oracle for one random draw
    Coeffs a{rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0)};
    StabilityConstants sc = stability_constants(dict, a, 1.0, 0.5);
    double smu2 = a[0] * dict.entries[0].bounds.mu[2] +
                  a[1] * dict.entries[1].bounds.mu[2];
    double smu1 = a[0] * dict.entries[0].bounds.mu[1] +
                  a[1] * dict.entries[1].bounds.mu[1];
    double skap = a[0] * dict.entries[0].bounds.kappa[1] +
                  a[1] * dict.entries[1].bounds.kappa[1];
    CHECK(rel_diff(sc.c_bar, smu2 / skap) <= 1e-14);
    CHECK(rel_diff(sc.c_hat,
                   1.0 / (1.0 - std::sqrt(0.5)) * smu1 / (skap * skap)) <=
          1e-14);

    EnergyDictionary off;
    off.entries.push_back(quadratic_entry(1.0, 0.0, 0.0));
    off.entries[0].bounds.kappa[1] = 0.5;
    off.entries[0].bounds.mu[1] = 1.0;
    CHECK_THROWS_AS(stability_constants(off, {1.0}), Error);
}

TEST_CASE("certified bounds hold on fresh samples") {
    Rng rng(110);
    for (int d : {1, 2, 3}) {
        for (const EnergyEntry& e : builtin_entries(d)) {
            for (int t = 0; t < 1000; ++t) {
                Coord x{rng.uniform(), rng.uniform(), rng.uniform()};
                double scale = t % 3 == 0 ? 0.05 : (t % 3 == 1 ? 1.0 : 8.0);
                Mat y = rng.random_mat(d, scale);
                double r = y.frob_sq();
                if (r <= 0.0) continue;
                double c = e.energy(x, y, d);
                CHECK(c >= e.bounds.kappa[0] * r - 1e-12 * r);
                CHECK(c <= e.bounds.mu[0] * r + 1e-12 * r);

                Mat h = rng.random_mat(d);
                double hn = h.frob_sq();
                double ray = ddot(h, e.hessian(x, y, d).contract(h, d));
                CHECK(ray >= e.bounds.kappa[1] * hn - 1e-12 * hn);
                CHECK(ray <= e.bounds.mu[1] * hn + 1e-12 * hn);
            }
        }
    }
}
