#include "hsp/support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hsp {

namespace {

// Fiber tracking with stable labels anchored at a fixed large-|z| point.
// All geometry here is label-consistent rather than tied to a canonical
// branch order; the public operations only need consistency.
class BranchField {
 public:
  BranchField(const Pencil& P, const PrecisionPolicy& policy)
      : curve_(P), policy_(policy) {
    bps_ = branch_points(curve_, policy_);
    scale_ = 1.0;
    for (cxd b : bps_) scale_ = std::max(scale_, std::abs(b));
    clearance_ = 1e-3 * scale_;
    anchor_ = cxd(std::max(10.0, 4 * scale_), 0);
    for (cxd b : bps_)
      if (std::abs(anchor_ - b) < 10 * clearance_) {
        anchor_ += cxd(0, 0.1);
        break;
      }
    auto f = branches_at(curve_, anchor_, policy_);
    if (static_cast<int>(f.w.size()) != curve_.order())
      throw BranchCollision("branch field: deficient fiber at the anchor");
    anchor_vals_ = label_anchor(f.w);
    alphas_ = roots(P.characteristic(), policy_);
  }

  const PlaneCurve& curve() const { return curve_; }
  int k() const { return curve_.order(); }
  cxd anchor() const { return anchor_; }
  const std::vector<cxd>& anchor_vals() const { return anchor_vals_; }
  const std::vector<cxd>& branch_pts() const { return bps_; }
  double clearance() const { return clearance_; }
  double scale() const { return scale_; }

  cxd alpha(int j_family) const {
    if (j_family < 1 || j_family > static_cast<int>(alphas_.size()))
      throw std::invalid_argument("family index out of range");
    return alphas_[j_family - 1];
  }

  // Labeled fiber at z1 continued from the labeled values v0 at z0,
  // subdividing the segment until nearest-root matching is unambiguous
  // (each move below 0.45 x the min pairwise separation at the new point).
  std::vector<cxd> track(cxd z0, const std::vector<cxd>& v0, cxd z1,
                         int depth = 0) const {
    auto f = branches_at(curve_, z1, policy_);
    if (f.w.size() == v0.size()) {
      auto matched = greedy_match(v0, f.w);
      // matching is unambiguous when each value moved by less than half its
      // own gap to the nearest other value (a global min-separation test
      // would force quadratically small steps near poles of the fiber)
      bool ok = true;
      for (size_t a = 0; a < matched.size() && ok; ++a) {
        double sep = std::numeric_limits<double>::infinity();
        for (size_t b = 0; b < matched.size(); ++b)
          if (b != a) sep = std::min(sep, std::abs(matched[a] - matched[b]));
        if (std::abs(matched[a] - v0[a]) >= 0.45 * sep) ok = false;
      }
      if (ok) return matched;
    }
    if (depth > 48) throw BranchCollision("branch field: tracking lost between points");
    cxd zm = 0.5 * (z0 + z1);
    auto vm = track(z0, v0, zm, depth + 1);
    return track(zm, vm, z1, depth + 1);
  }

  std::vector<cxd> at(cxd z) const { return track(anchor_, anchor_vals_, z); }

 private:
  std::vector<cxd> label_anchor(const std::vector<cxd>& fiber) const {
    const int k = curve_.order();
    std::vector<cxd> pred(k);
    try {
      cxd y = 1.0 / anchor_;
      for (int b = 1; b <= k; ++b) {
        auto bs = branch_series_at_infinity(curve_, b, 8, policy_);
        cxd v{};
        for (int i = bs.series.order(); i >= 1; --i) v = (v + bs.series.eps(i)) * y;
        pred[b - 1] = v;
      }
      return greedy_match(pred, fiber);
    } catch (const std::runtime_error&) {
      // repeated xi roots: fall back to a deterministic lexicographic order
      auto sorted = fiber;
      std::sort(sorted.begin(), sorted.end(), [](cxd a, cxd b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
      });
      return sorted;
    }
  }

  static std::vector<cxd> greedy_match(const std::vector<cxd>& pred,
                                       const std::vector<cxd>& fiber) {
    const size_t k = pred.size();
    std::vector<cxd> out(k);
    std::vector<bool> up(k, false), uf(fiber.size(), false);
    for (size_t step = 0; step < k; ++step) {
      double best = std::numeric_limits<double>::infinity();
      size_t bp = 0, bf = 0;
      for (size_t a = 0; a < k; ++a) {
        if (up[a]) continue;
        for (size_t b = 0; b < fiber.size(); ++b) {
          if (uf[b]) continue;
          double d = std::abs(pred[a] - fiber[b]);
          if (d < best) {
            best = d;
            bp = a;
            bf = b;
          }
        }
      }
      up[bp] = true;
      uf[bf] = true;
      out[bp] = fiber[bf];
    }
    return out;
  }

  PlaneCurve curve_;
  PrecisionPolicy policy_;
  std::vector<cxd> bps_;
  std::vector<cxd> anchor_vals_;
  std::vector<cxd> alphas_;
  cxd anchor_;
  double scale_ = 1;
  double clearance_ = 0;
};

double dist_to_segment(cxd p, cxd a, cxd b) {
  cxd ab = b - a;
  double len2 = std::norm(ab);
  if (len2 == 0) return std::abs(p - a);
  double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

void check_pair(const Pencil& P, std::pair<int, int> pr) {
  const int k = P.order();
  if (pr.first == pr.second || pr.first < 1 || pr.second < 1 || pr.first > k ||
      pr.second > k)
    throw std::invalid_argument("branch pair must be two distinct labels in 1..k");
}

// Labeled fiber lookup at arbitrary parameters of a fixed segment, backed by
// a pre-tabulated polyline so scattered quadrature nodes stay on-label.
class SegmentTracker {
 public:
  SegmentTracker(const BranchField& field, cxd z0, std::vector<cxd> v0, cxd z1,
                 int steps = 128)
      : field_(field), z0_(z0), z1_(z1) {
    ts_.push_back(0);
    vals_.push_back(std::move(v0));
    for (int s = 1; s <= steps; ++s) {
      double t = double(s) / steps;
      vals_.push_back(field_.track(at_param(ts_.back()), vals_.back(), at_param(t)));
      ts_.push_back(t);
    }
  }

  cxd at_param(double t) const { return z0_ + t * (z1_ - z0_); }

  std::vector<cxd> operator()(double t) const {
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    size_t hi = std::min<size_t>(it - ts_.begin(), ts_.size() - 1);
    size_t lo = hi == 0 ? 0 : hi - 1;
    double span = ts_[hi] - ts_[lo];
    double w = span > 0 ? (t - ts_[lo]) / span : 0;
    std::vector<cxd> pred(vals_[lo].size());
    for (size_t b = 0; b < pred.size(); ++b)
      pred[b] = (1 - w) * vals_[lo][b] + w * vals_[hi][b];
    return field_.track(at_param(ts_[lo]), pred, at_param(t), 40);
  }

 private:
  const BranchField& field_;
  cxd z0_, z1_;
  std::vector<double> ts_;
  std::vector<std::vector<cxd>> vals_;
};

}  // namespace

std::vector<cxd> scaled_branches(const Pencil& P, int j_family, cxd z,
                                 const PrecisionPolicy& policy) {
  BranchField field(P, policy);
  cxd al = field.alpha(j_family);
  auto vals = field.at(z);
  for (auto& v : vals) v *= al;
  return vals;
}

GammaLocus gamma_locus(const Pencil& P, int j_family, std::array<int, 3> triple,
                       Rect rect, double res, const PrecisionPolicy& policy) {
  const int k = P.order();
  if (k < 3) return GammaLocus{triple, {}, res};  // fewer than 3 branches: empty
  for (int t : triple)
    if (t < 1 || t > k) throw std::invalid_argument("gamma_locus: label out of range");
  if (triple[0] == triple[1] || triple[0] == triple[2] || triple[1] == triple[2])
    throw std::invalid_argument("gamma_locus: labels must be distinct");
  if (res <= 0) throw std::invalid_argument("gamma_locus: res > 0 required");
  if (rect.x1 < rect.x0) std::swap(rect.x0, rect.x1);
  if (rect.y1 < rect.y0) std::swap(rect.y0, rect.y1);

  BranchField field(P, policy);
  field.alpha(j_family);  // validate the family label
  for (cxd b : field.branch_pts())
    if (b.real() > rect.x0 - field.clearance() && b.real() < rect.x1 + field.clearance() &&
        b.imag() > rect.y0 - field.clearance() && b.imag() < rect.y1 + field.clearance())
      throw BranchCollision("gamma_locus: branch point inside the rectangle");

  const int I = triple[0] - 1, J = triple[1] - 1, L = triple[2] - 1;
  // the common alpha factor scales the collinearity function by |alpha|^2 > 0
  // and cannot move its zero set, so unscaled branch values are used
  auto Fof = [&](const std::vector<cxd>& v) {
    return std::imag((v[I] - v[L]) * std::conj(v[J] - v[L]));
  };

  const int nx = std::max(2, int(std::lround((rect.x1 - rect.x0) / res)) + 1);
  const int ny = std::max(2, int(std::lround((rect.y1 - rect.y0) / res)) + 1);
  auto zat = [&](int ix, int iy) {
    return cxd(rect.x0 + ix * res, rect.y0 + iy * res);
  };

  std::vector<std::vector<cxd>> fib(size_t(nx) * ny);
  std::vector<double> F(size_t(nx) * ny, std::numeric_limits<double>::quiet_NaN());
  auto idx = [&](int ix, int iy) { return size_t(iy) * nx + ix; };

  std::vector<cxd> row_seed = field.at(zat(0, 0));
  cxd row_seed_z = zat(0, 0);
  for (int iy = 0; iy < ny; ++iy) {
    if (iy > 0) {
      row_seed = field.track(row_seed_z, row_seed, zat(0, iy));
      row_seed_z = zat(0, iy);
    }
    std::vector<cxd> cur = row_seed;
    cxd curz = row_seed_z;
    for (int ix = 0; ix < nx; ++ix) {
      cxd z = zat(ix, iy);
      try {
        if (z != curz) cur = field.track(curz, cur, z);
        curz = z;
        fib[idx(ix, iy)] = cur;
        F[idx(ix, iy)] = Fof(cur);
      } catch (const BranchCollision&) {
        // isolated degenerate grid point (e.g. a pole of the fiber): skip it
      }
    }
  }

  GammaLocus locus{triple, {}, res};
  auto refine = [&](int ixa, int iya, int ixb, int iyb) {
    double Fa = F[idx(ixa, iya)], Fb = F[idx(ixb, iyb)];
    if (std::isnan(Fa) || std::isnan(Fb)) return;
    if (Fa == 0) {
      locus.points.push_back(zat(ixa, iya));
      return;
    }
    if (Fa * Fb >= 0) return;
    cxd za = zat(ixa, iya), zb = zat(ixb, iyb);
    std::vector<cxd> va = fib[idx(ixa, iya)];
    while (std::abs(zb - za) > res / 10) {
      cxd zm = 0.5 * (za + zb);
      std::vector<cxd> vm;
      try {
        vm = field.track(za, va, zm);
      } catch (const BranchCollision&) {
        return;
      }
      double Fm = Fof(vm);
      if (Fa * Fm <= 0) {
        zb = zm;
      } else {
        za = zm;
        va = std::move(vm);
        Fa = Fm;
      }
    }
    locus.points.push_back(0.5 * (za + zb));
  };
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix + 1 < nx; ++ix) refine(ix, iy, ix + 1, iy);
  for (int iy = 0; iy + 1 < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) refine(ix, iy, ix, iy + 1);
  return locus;
}

Example3Circle example3_circle(cxd b1, cxd b2, cxd b3) {
  const double al[3] = {b1.real(), b2.real(), b3.real()};
  const double be[3] = {b1.imag(), b2.imag(), b3.imag()};
  static const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                  {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
  static const int signs[6] = {1, 1, 1, -1, -1, -1};
  auto eta = [&](auto mono) {
    double s = 0;
    for (int p = 0; p < 6; ++p) {
      const int* q = perms[p];
      s += signs[p] * mono(al[q[0]], al[q[1]], al[q[2]], be[q[0]], be[q[1]], be[q[2]]);
    }
    return s;
  };
  Example3Circle c;
  c.A = eta([](double a1, double a2, double, double, double b2, double) {
    return a1 * b2;
  });
  c.Bv = eta([](double a1, double, double, double, double b2, double) {
           return a1 * b2 * b2;
         }) +
         eta([](double a1, double a2, double, double, double, double) {
           return a1 * a2 * a2;
         });
  c.Bu = eta([](double, double, double, double b1, double b2, double) {
           return b1 * b1 * b2;
         }) +
         eta([](double a1, double, double, double, double b2, double) {
           return a1 * a1 * b2;
         });
  c.C = eta([](double a1, double, double, double, double b2, double b3) {
          return a1 * b2 * b3 * b3;
        }) +
        eta([](double a1, double, double a3, double, double b2, double) {
          return a1 * a3 * a3 * b2;
        });
  double scale = std::max({1.0, std::abs(b1), std::abs(b2), std::abs(b3)});
  if (std::abs(c.A) <= 1e-12 * scale * scale)
    throw CollinearB("example3_circle: collinear poles give no circle");
  double cu = c.Bu / (2 * c.A), cv = c.Bv / (2 * c.A);
  double r2 = cu * cu + cv * cv + c.C / c.A;
  if (r2 <= 0) throw CollinearB("example3_circle: degenerate (empty) circle");
  c.center = cxd(cu, cv);
  c.radius = std::sqrt(r2);
  return c;
}

double h_difference(const Pencil& P, int j_family, std::pair<int, int> pair, cxd base,
                    cxd z, const PrecisionPolicy& policy) {
  check_pair(P, pair);
  if (z == base) return 0;
  BranchField field(P, policy);
  cxd al = field.alpha(j_family);
  for (cxd b : field.branch_pts())
    if (dist_to_segment(b, base, z) < field.clearance())
      throw BranchCollision("h_difference: segment within clearance of a branch point");

  SegmentTracker seg(field, base, field.at(base), z);
  const int I = pair.first - 1, J = pair.second - 1;
  cxd dz = z - base;
  auto f = [&](double t) {
    auto v = seg(t);
    return (al * (v[I] - v[J]) * dz).real();
  };
  double err = 0;
  double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, 0.0, 1.0, 15, 1e-10, &err);
  if (err > 1e-9 * std::max(1.0, std::abs(val)))
    throw QuadratureFail("h_difference: quadrature error target unmet");
  return val;
}

LevelCurve trace_level_curve(const Pencil& P, int j_family, std::pair<int, int> pair,
                             cxd seed, double step, double max_len,
                             const PrecisionPolicy& policy) {
  check_pair(P, pair);
  if (step <= 0 || max_len <= 0)
    throw std::invalid_argument("trace_level_curve: step and max_len must be positive");
  BranchField field(P, policy);
  cxd al = field.alpha(j_family);
  const int I = pair.first - 1, J = pair.second - 1;
  auto gval = [&](const std::vector<cxd>& v) { return al * (v[I] - v[J]); };

  auto seed_vals = field.at(seed);
  const double g_seed = std::abs(gval(seed_vals));
  if (g_seed == 0) throw LostTrack("trace_level_curve: seed is a branch point");
  const double tolH = 1e-9 * std::max(1.0, g_seed) * step;
  const double stop_radius = 4 * std::max(field.scale(), std::abs(seed)) + 10;

  // poles of the fiber (zeros of Q_k) carry a log singularity of H; the trace
  // must stop there just like at branch points
  std::vector<cxd> poles;
  {
    const ComplexPolynomial& qk = field.curve().Q(field.k());
    if (qk.degree() >= 1) poles = roots(qk, policy);
  }
  auto near_branch_point = [&](cxd z) {
    for (cxd b : field.branch_pts())
      if (std::abs(z - b) < std::max(field.clearance(), step)) return true;
    for (cxd p : poles)
      if (std::abs(z - p) < std::max(field.clearance(), step)) return true;
    return false;
  };

  struct Arm {
    std::vector<cxd> pts;
    std::vector<double> dens;
    std::vector<cxd> gs;
  };
  auto trace_arm = [&](int dir) {
    Arm arm;
    cxd z = seed;
    auto vals = seed_vals;
    double H = 0, arclen = 0;
    cxd prev_u{};
    const int max_steps = int(max_len / step * 4) + 100;
    for (int it = 0; it < max_steps && arclen < max_len; ++it) {
      cxd g0 = gval(vals);
      if (std::abs(g0) < 1e-9 * std::max(1.0, g_seed)) break;  // branch point in w
      cxd u = cxd(0, 1) * std::conj(g0) / std::abs(g0);
      if (it == 0)
        u *= double(dir);
      else if ((u * std::conj(prev_u)).real() < 0)
        u = -u;
      cxd z1 = z + step * u;
      if (near_branch_point(z1) || std::abs(z1) > stop_radius) break;
      std::vector<cxd> vm, v1;
      try {
        vm = field.track(z, vals, 0.5 * (z + z1));
        v1 = field.track(0.5 * (z + z1), vm, z1);
      } catch (const BranchCollision&) {
        break;
      }
      H += ((g0 + 4.0 * gval(vm) + gval(v1)) / 6.0 * (z1 - z)).real();
      bool corrected = false;
      for (int c = 0; c < 10; ++c) {
        if (std::abs(H) <= tolH) {
          corrected = true;
          break;
        }
        cxd g1 = gval(v1);
        double mag = std::abs(g1);
        if (mag < 1e-12) break;
        cxd d = (-H / mag) * std::conj(g1) / mag;
        if (std::abs(d) > 0.8 * step)
          throw LostTrack("trace_level_curve: corrector step diverged");
        cxd z2 = z1 + d;
        std::vector<cxd> v2;
        try {
          v2 = field.track(z1, v1, z2);
        } catch (const BranchCollision&) {
          break;
        }
        H += ((g1 + gval(v2)) / 2.0 * d).real();
        z1 = z2;
        v1 = std::move(v2);
      }
      if (!corrected) throw LostTrack("trace_level_curve: corrector failed to converge");
      prev_u = (z1 - z) / std::abs(z1 - z);
      arclen += std::abs(z1 - z);
      z = z1;
      vals = std::move(v1);
      arm.pts.push_back(z);
      arm.dens.push_back(std::abs(gval(vals)) / (2 * M_PI));
      arm.gs.push_back(gval(vals));
    }
    return arm;
  };

  Arm back = trace_arm(-1), fwd = trace_arm(+1);
  LevelCurve out;
  out.pair = pair;
  out.base = seed;
  out.points.assign(back.pts.rbegin(), back.pts.rend());
  out.density.assign(back.dens.rbegin(), back.dens.rend());
  out.gvals.assign(back.gs.rbegin(), back.gs.rend());
  out.points.push_back(seed);
  out.density.push_back(g_seed / (2 * M_PI));
  out.gvals.push_back(gval(seed_vals));
  out.points.insert(out.points.end(), fwd.pts.begin(), fwd.pts.end());
  out.density.insert(out.density.end(), fwd.dens.begin(), fwd.dens.end());
  out.gvals.insert(out.gvals.end(), fwd.gs.begin(), fwd.gs.end());
  return out;
}

DensityReport density_vs_roots(const LevelCurve& level, const RootMeasure& mu,
                               double window) {
  if (window <= 0) throw std::invalid_argument("density_vs_roots: window > 0 required");
  const size_t nv = level.points.size();
  if (nv < 2) throw std::invalid_argument("density_vs_roots: level curve too short");
  std::vector<double> s(nv, 0);
  for (size_t v = 1; v < nv; ++v)
    s[v] = s[v - 1] + std::abs(level.points[v] - level.points[v - 1]);

  // assign each atom the arclength of its nearest vertex, if close enough
  std::vector<double> atom_s;
  for (cxd a : mu.atoms) {
    double best = std::numeric_limits<double>::infinity();
    size_t bv = 0;
    for (size_t v = 0; v < nv; ++v) {
      double d = std::abs(a - level.points[v]);
      if (d < best) {
        best = d;
        bv = v;
      }
    }
    if (best <= window) atom_s.push_back(s[bv]);
  }
  std::sort(atom_s.begin(), atom_s.end());

  DensityReport rep;
  const double total = double(mu.atoms.size());
  for (size_t v = 0; v < nv; ++v) {
    auto lo = std::lower_bound(atom_s.begin(), atom_s.end(), s[v] - window / 2);
    auto hi = std::upper_bound(atom_s.begin(), atom_s.end(), s[v] + window / 2);
    long count = hi - lo;
    if (count < 3 || level.density[v] <= 0) {
      ++rep.skipped;
      continue;
    }
    double empirical = double(count) / (total * window);
    rep.ratios.push_back(empirical / level.density[v]);
  }
  if (rep.ratios.empty())
    throw SparseWindow("density_vs_roots: every window holds fewer than 3 atoms");
  double sum = 0;
  for (double r : rep.ratios) sum += r;
  rep.mean = sum / rep.ratios.size();
  double var = 0;
  for (double r : rep.ratios) var += (r - rep.mean) * (r - rep.mean);
  rep.spread = std::sqrt(var / rep.ratios.size());
  return rep;
}

}  // namespace hsp
