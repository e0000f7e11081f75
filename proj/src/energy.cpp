#include "hyperwave/energy.hpp"

#include <algorithm>
#include <cstdio>

namespace hyperwave {

namespace {

// Saturating profile psi(r) = r^2 / (1 + r) and its derivatives.
// psi(0) = psi'(0) = 0; psi', psi'' >= 0; all derivatives bounded on [0, inf).
double psi0(double r) { return r * r / (1.0 + r); }
double psi1(double r) {
    double q = 1.0 + r;
    return 1.0 - 1.0 / (q * q);
}
double psi2(double r) {
    double q = 1.0 + r;
    return 2.0 / (q * q * q);
}
double psi3(double r) {
    double q = 1.0 + r;
    return -6.0 / (q * q * q * q);
}

void require_finite(const Mat& y) {
    if (!y.finite()) throw Error("non-finite matrix argument");
}

}  // namespace

double EnergyEntry::energy(const Coord& x, const Mat& y, int d) const {
    require_finite(y);
    double phi = weight(x, d);
    double r = y.frob_sq();
    double tr = y.trace();
    double q = a * r + b * tr * tr + c * sym_part(y).frob_sq();
    if (family == EnergyFamily::BoundedNonlinear) q += nl * psi0(r);
    return phi * q;
}

Mat EnergyEntry::stress(const Coord& x, const Mat& y, int d) const {
    require_finite(y);
    double phi = weight(x, d);
    double tr = y.trace();
    Mat out = 2.0 * a * y;
    for (int i = 0; i < d; ++i) out(i, i) += 2.0 * b * tr;
    out += 2.0 * c * sym_part(y);
    if (family == EnergyFamily::BoundedNonlinear)
        out += 2.0 * nl * psi1(y.frob_sq()) * y;
    return phi * out;
}

Tensor4 EnergyEntry::hessian(const Coord& x, const Mat& y, int d) const {
    require_finite(y);
    double phi = weight(x, d);
    double p1 = 0.0, p2 = 0.0;
    if (family == EnergyFamily::BoundedNonlinear) {
        double r = y.frob_sq();
        p1 = psi1(r);
        p2 = psi2(r);
    }
    // rank-one term grouped as w * (y_ij * y_kl) so the (ij)<->(kl) swap is
    // bit-exact
    const double w = 4.0 * nl * p2;
    Tensor4 t;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    double v = 0.0;
                    if (i == k && j == l) v += 2.0 * a + 2.0 * nl * p1;
                    if (i == j && k == l) v += 2.0 * b;
                    if (i == k && j == l) v += c;
                    if (i == l && j == k) v += c;
                    v += w * (y(i, j) * y(k, l));
                    t(i, j, k, l) = phi * v;
                }
    return t;
}

Mat EnergyEntry::third_derivative(const Coord& x, const Mat& y, const Mat& h1,
                                  const Mat& h2, int d) const {
    require_finite(y);
    require_finite(h1);
    require_finite(h2);
    if (family == EnergyFamily::Quadratic) return Mat{};
    double phi = weight(x, d);
    double r = y.frob_sq();
    double p2 = psi2(r), p3 = psi3(r);
    double yh1 = ddot(y, h1), yh2 = ddot(y, h2), h12 = ddot(h1, h2);
    Mat out;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            out(i, j) = nl * phi *
                        (8.0 * p3 * y(i, j) * yh1 * yh2 +
                         4.0 * p2 * (h1(i, j) * yh2 + h2(i, j) * yh1 +
                                     y(i, j) * h12));
    return out;
}

CombinedEnergy::CombinedEnergy(const EnergyDictionary& dict, Coeffs alpha)
    : dict_(&dict), alpha_(std::move(alpha)) {
    if (static_cast<int>(alpha_.size()) != dict.size())
        throw ShapeError("combine: dictionary has " +
                         std::to_string(dict.size()) + " entries, alpha has " +
                         std::to_string(alpha_.size()) + " components");
}

double CombinedEnergy::energy(const Coord& x, const Mat& y, int d) const {
    double s = 0.0;
    for (int k = 0; k < dict_->size(); ++k)
        s += alpha_[k] * dict_->entries[k].energy(x, y, d);
    return s;
}

Mat CombinedEnergy::stress(const Coord& x, const Mat& y, int d) const {
    Mat s;
    for (int k = 0; k < dict_->size(); ++k)
        s += alpha_[k] * dict_->entries[k].stress(x, y, d);
    return s;
}

Tensor4 CombinedEnergy::hessian(const Coord& x, const Mat& y, int d) const {
    Tensor4 t;
    for (int k = 0; k < dict_->size(); ++k) {
        Tensor4 tk = dict_->entries[k].hessian(x, y, d);
        tk *= alpha_[k];
        t += tk;
    }
    return t;
}

Mat CombinedEnergy::third_derivative(const Coord& x, const Mat& y,
                                     const Mat& h1, const Mat& h2,
                                     int d) const {
    Mat s;
    for (int k = 0; k < dict_->size(); ++k)
        s += alpha_[k] *
             dict_->entries[k].third_derivative(x, y, h1, h2, d);
    return s;
}

HessianBounds hessian_bounds(const EnergyDictionary& dict,
                             const Coeffs& alpha) {
    if (static_cast<int>(alpha.size()) != dict.size())
        throw ShapeError("hessian_bounds: size mismatch");
    HessianBounds hb;
    for (int k = 0; k < dict.size(); ++k) {
        hb.kappa += alpha[k] * dict.entries[k].bounds.kappa[1];
        hb.mu += alpha[k] * dict.entries[k].bounds.mu[1];
    }
    return hb;
}

bool gap_condition_holds(const EnergyDictionary& dict, const Coeffs& alpha) {
    HessianBounds hb = hessian_bounds(dict, alpha);
    return 0.875 * hb.mu < hb.kappa && hb.kappa < 1.125 * hb.mu;
}

namespace {
std::string ineq_msg(const char* name, int idx, double lhs, const char* rel,
                     double rhs) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s(%d): %.6g %s %.6g", name, idx, lhs,
                  rel, rhs);
    return buf;
}
}  // namespace

AdmissibilityReport check_admissible(const EnergyDictionary& dict,
                                     const Coeffs& alpha,
                                     const AdmissibilityThresholds& thr) {
    if (static_cast<int>(alpha.size()) != dict.size())
        throw ShapeError("check_admissible: size mismatch");
    AdmissibilityReport rep;
    for (int k = 0; k < dict.size(); ++k)
        if (!(alpha[k] > 0.0))
            rep.violations.push_back("positivity(" + std::to_string(k + 1) +
                                     ")");
    for (int a = 0; a < 2; ++a) {
        double s = 0.0;
        for (int k = 0; k < dict.size(); ++k)
            s += alpha[k] * dict.entries[k].bounds.kappa[a];
        if (s < thr.kappa[a])
            rep.violations.push_back(
                ineq_msg("kappa", a + 1, s, "<", thr.kappa[a]));
    }
    for (int b = 0; b < 7; ++b) {
        double s = 0.0;
        for (int k = 0; k < dict.size(); ++k)
            s += alpha[k] * dict.entries[k].bounds.mu[b + 1];
        if (s > thr.mu[b])
            rep.violations.push_back(ineq_msg("mu", b + 1, s, ">", thr.mu[b]));
    }
    rep.ok = rep.violations.empty();
    return rep;
}

StabilityConstants stability_constants(const EnergyDictionary& dict,
                                       const Coeffs& alpha,
                                       double embedding_const,
                                       double gap_eps) {
    if (!(gap_eps > 0.0 && gap_eps < 1.0))
        throw Error("stability_constants: gap_eps must lie in (0,1)");
    if (!(embedding_const > 0.0))
        throw Error("stability_constants: embedding_const must be positive");
    if (!gap_condition_holds(dict, alpha))
        throw Error("stability_constants: bound-gap condition fails for alpha");
    double sum_mu2 = 0.0, sum_kappa1 = 0.0, sum_mu1 = 0.0;
    double min_mu2 = 0.0, max_mu2 = 0.0, min_k1 = 0.0, max_k1 = 0.0;
    for (int k = 0; k < dict.size(); ++k) {
        const EntryBounds& b = dict.entries[k].bounds;
        sum_mu2 += alpha[k] * b.mu[2];
        sum_mu1 += alpha[k] * b.mu[1];
        sum_kappa1 += alpha[k] * b.kappa[1];
        if (k == 0) {
            min_mu2 = max_mu2 = b.mu[2];
            min_k1 = max_k1 = b.kappa[1];
        } else {
            min_mu2 = std::min(min_mu2, b.mu[2]);
            max_mu2 = std::max(max_mu2, b.mu[2]);
            min_k1 = std::min(min_k1, b.kappa[1]);
            max_k1 = std::max(max_k1, b.kappa[1]);
        }
    }
    StabilityConstants sc;
    sc.c_bar = sum_mu2 / sum_kappa1;
    sc.c_hat = embedding_const / (1.0 - std::sqrt(1.0 - gap_eps)) * sum_mu1 /
               (sum_kappa1 * sum_kappa1);
    sc.zeta = min_mu2 / max_k1;
    sc.eta = max_mu2 / min_k1;
    return sc;
}

namespace {

// Structured matrix shapes that realize the energy/Hessian extrema of both
// families (scaled copies of each are sampled alongside random matrices).
std::vector<Mat> structured_shapes(int d) {
    std::vector<Mat> shapes;
    shapes.push_back(Mat::identity(d));
    if (d >= 2) {
        Mat antisym;
        antisym(0, 1) = 1.0;
        antisym(1, 0) = -1.0;
        shapes.push_back(antisym);
        Mat traceless;
        traceless(0, 0) = 1.0;
        traceless(1, 1) = -1.0;
        shapes.push_back(traceless);
    }
    Mat rank1;
    rank1(0, 0) = 1.0;
    shapes.push_back(rank1);
    return shapes;
}

std::vector<Coord> sample_points(const EnergyEntry& e, int d, Rng& rng,
                                 int n_random) {
    std::vector<Coord> xs;
    Coord corner{};
    for (int a = 0; a < d; ++a) corner[a] = 0.02;
    xs.push_back(corner);
    xs.push_back(e.weight.center);
    for (int i = 0; i < n_random; ++i) {
        Coord x{};
        for (int a = 0; a < d; ++a) x[a] = rng.uniform(0.01, 0.99);
        xs.push_back(x);
    }
    return xs;
}

double max_abs_entry(const Mat& m, int d) {
    double v = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) v = std::max(v, std::abs(m(i, j)));
    return v;
}

}  // namespace

void certify_bounds(EnergyEntry& e, int d, Rng& rng, int n_samples) {
    const double safety = 1.05;
    const double quad_low = d == 1 ? e.a + e.b + e.c : e.a;
    const double quad_high = e.a + e.b * d + e.c;
    const double phi_min = e.weight.floor;

    std::vector<Mat> shapes = structured_shapes(d);
    const double scales[] = {1e-6, 1e-3, 0.1, 0.5, 0.7071067811865476,
                             1.0,  2.0,  5.0, 30.0, 1e3};
    std::vector<Coord> xs = sample_points(e, d, rng, 6);

    if (e.family == EnergyFamily::Quadratic) {
        e.bounds.kappa[0] = phi_min * quad_low;
        e.bounds.kappa[1] = 2.0 * phi_min * quad_low;
        e.bounds.mu[0] = quad_high;
        e.bounds.mu[1] = 2.0 * quad_high;
    } else {
        double emin = 0.0, emax = 0.0, hmin = 0.0, hmax = 0.0;
        bool first = true;
        auto visit = [&](const Coord& x, const Mat& y) {
            double r = y.frob_sq();
            if (r <= 0.0) return;
            double eratio = e.energy(x, y, d) / r;
            Tensor4 hs = e.hessian(x, y, d);
            for (int t = 0; t < 16; ++t) {
                Mat h = t < static_cast<int>(shapes.size())
                            ? shapes[t]
                            : rng.random_mat(d);
                double hn = h.frob_sq();
                if (hn <= 0.0) continue;
                double ray = ddot(h, hs.contract(h, d)) / hn;
                if (first) {
                    emin = emax = eratio;
                    hmin = hmax = ray;
                    first = false;
                } else {
                    hmin = std::min(hmin, ray);
                    hmax = std::max(hmax, ray);
                }
                emin = std::min(emin, eratio);
                emax = std::max(emax, eratio);
            }
        };
        for (const Coord& x : xs) {
            for (const Mat& s : shapes)
                for (double sc : scales) visit(x, sc * s);
            int n_rand = std::max(16, n_samples / static_cast<int>(xs.size()));
            for (int i = 0; i < n_rand; ++i)
                visit(x, rng.random_mat(d, scales[rng.next_u64() % 10]));
        }
        e.bounds.kappa[0] = emin / safety;
        e.bounds.kappa[1] = hmin / safety;
        e.bounds.mu[0] = emax * safety;
        e.bounds.mu[1] = hmax * safety;
    }

    // Sup-norms of third/fourth Y-derivatives and the x-mixed derivatives,
    // sampled over the unit box and a bounded matrix range. Diagnostics only.
    double m2 = 0.0, m3 = 0.0, m4 = 0.0, m56 = 0.0, m7 = 0.0;
    const double dx = 1e-3, dy = 1e-3;
    auto unit = [](int i, int j) {
        Mat u;
        u(i, j) = 1.0;
        return u;
    };
    for (const Coord& x : xs) {
        for (int s = 0; s < 24; ++s) {
            Mat y = rng.random_mat(d, s % 2 ? 0.7 : 4.0);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k)
                        for (int l = 0; l < d; ++l) {
                            Mat t3 = e.third_derivative(x, y, unit(i, j),
                                                        unit(k, l), d);
                            m2 = std::max(m2, max_abs_entry(t3, d));
                            // fourth derivative: FD of the third in Y
                            Mat yp = y, ym = y;
                            yp(i, j) += dy;
                            ym(i, j) -= dy;
                            Mat t4 = e.third_derivative(x, yp, unit(i, j),
                                                        unit(k, l), d) -
                                     e.third_derivative(x, ym, unit(i, j),
                                                        unit(k, l), d);
                            m3 = std::max(m3, max_abs_entry(t4, d) / (2 * dy));
                        }
            for (int l = 0; l < d; ++l) {
                Coord xp = x, xm = x;
                xp[l] += dx;
                xm[l] -= dx;
                Mat ds = e.stress(xp, y, d) - e.stress(xm, y, d);
                for (int k = 0; k < d; ++k)
                    m4 = std::max(m4, std::abs(ds(k, l)) / (2 * dx));
                Tensor4 hp = e.hessian(xp, y, d);
                Tensor4 hm = e.hessian(xm, y, d);
                for (std::size_t q = 0; q < hp.t.size(); ++q)
                    m56 = std::max(m56,
                                   std::abs(hp.t[q] - hm.t[q]) / (2 * dx));
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) {
                        Mat tp = e.third_derivative(xp, y, unit(i, j),
                                                    unit(i, j), d);
                        Mat tm = e.third_derivative(xm, y, unit(i, j),
                                                    unit(i, j), d);
                        m7 = std::max(m7,
                                      max_abs_entry(tp - tm, d) / (2 * dx));
                    }
            }
        }
    }
    e.bounds.mu[2] = m2 * safety;
    e.bounds.mu[3] = m3 * safety;
    e.bounds.mu[4] = m4 * safety;
    e.bounds.mu[5] = m56 * safety;
    e.bounds.mu[6] = m56 * safety;  // equals mu[5]: mixed partials commute
    e.bounds.mu[7] = m7 * safety;
}

void validate_positive(const Coeffs& alpha) {
    for (std::size_t k = 0; k < alpha.size(); ++k)
        if (!(alpha[k] > 0.0))
            throw Error("alpha component " + std::to_string(k + 1) +
                        " must be strictly positive");
}

}  // namespace hyperwave
