// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/oracles.hpp"
#include "oracles/schubert.hpp"
#include "ssfilter/cli.hpp"
#include "ssfilter/engine.hpp"
#include "ssfilter/errors.hpp"
#include "ssfilter/rings.hpp"

using namespace ssfilter;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::ostringstream why;

  void fail(const std::string& what) {
    if (ok) why << what;
    ok = false;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

JobConfig job(const std::string& family, int n) {
  JobConfig c;
  c.family = family;
  c.n = n;
  return c;
}

std::vector<std::pair<std::string, std::int64_t>> euler_log;

void log_euler(const std::string& instance, const Page& e1, const Page& e2, Outcome& out) {
  const auto a = euler_characteristic(e1), b = euler_characteristic(e2);
  euler_log.emplace_back(instance, a - b);
  if (a != b) out.fail("chi(E1) != chi(E2) for " + instance);
}

std::string cells_of(const Page& page) {
  std::ostringstream os;
  for (const auto& [pq, cell] : page.cells) os << "(" << pq.first << "," << pq.second << "):" << cell.dim << " ";
  return os.str();
}

EngineOptions quiet() {
  EngineOptions o;
  o.attach_labels = false;
  return o;
}

Outcome criterion_1() {
  Outcome out;
  const auto t0 = Clock::now();
  for (int n = 2; n <= 12; ++n) {
    JobConfig c = job("uconf-plane", n);
    c.artifacts = {"betti"};
    const JobReport r = run(c);
    const GradedDims want{{2 * n, 1}, {2 * n - 1, 1}};
    if (r.betti.empty() || r.betti[0].kind != "compact-support" || r.betti[0].dims != want)
      out.fail("n=" + std::to_string(n) + " got " + (r.betti.empty() ? "nothing" : r.betti[0].dims.to_string()));
  }
  const double s = seconds_since(t0);
  if (s >= 1.0) out.fail("took " + std::to_string(s) + " s");
  out.why << (out.ok ? "n = 2..12 exact, " + std::to_string(s) + " s" : "");
  return out;
}

Outcome criterion_2() {
  Outcome out;
  double at8 = 0;
  for (int n = 3; n <= 8; ++n) {
    const auto t0 = Clock::now();
    const auto fam = family_pencils_p1(1, n);
    const Page e1 = build_e1(fam, quiet());
    const Page e2 = compute_e2(e1);
    const auto b = betti_from_e2(fam, e2);
    if (n == 8) at8 = seconds_since(t0);
    log_euler("pencils-p1 m=1 n=" + std::to_string(n), e1, e2, out);
    if (e2.cells.size() != 1 || e2.dim(0, 4 * n - 4) != 1) out.fail("n=" + std::to_string(n) + " E2 " + cells_of(e2));
    if (!b.dual || b.dual->dims != GradedDims({{0, 1}})) out.fail("n=" + std::to_string(n) + " dual Betti wrong");
  }
  if (at8 >= 30.0) out.fail("n=8 took " + std::to_string(at8) + " s");
  if (out.ok) out.why << "single cell (0, 4n-4), dual {0:1}; n=8 in " << at8 << " s";
  return out;
}

Outcome criterion_3() {
  Outcome out;
  for (int n = 3; n <= 6; ++n) {
    const std::string tag = "n=" + std::to_string(n) + ": ";
    const auto fam = family_pencils_p1(1, n);
    const Column col(fam, 0);
    const auto d = assemble_differential(fam, 0);
    std::size_t kernel_total = 0;
    int kernel_degree = -1;
    std::vector<RationalVector> kernel;
    for (const auto& [q, block] : col.blocks()) {
      auto it = d.find(q);
      const RationalMatrix m = it != d.end() ? it->second : RationalMatrix(0, block.size());
      const RankKernel rk = rank_and_kernel(m);
      kernel_total += rk.kernel_basis.size();
      if (!rk.kernel_basis.empty()) {
        kernel_degree = q;
        kernel = rk.kernel_basis;
      }
    }
    if (kernel_total != 1 || kernel_degree != 4 * n - 4) {
      out.fail(tag + "kernel of d_1 has dim " + std::to_string(kernel_total));
      continue;
    }
    // s_{n-1} c_1^{n-1} in H^*(G(2, n+1)).
    const Element s = quotient_top_chern(n + 1);
    const Element x = multiply(s, power(Element::generator(s.algebra(), "c1"), n - 1));
    const int q = 4 * n - 4;
    RationalVector v(col.basis(q).size());
    bool placed = true;
    for (const auto& [b, c] : x.coeffs()) {
      const auto pos = col.position(q, 0, b);
      if (!pos) placed = false;
      else v[*pos] = c;
    }
    if (!placed || x.is_zero()) {
      out.fail(tag + "element is zero or not in degree 4n-4");
      continue;
    }
    const RationalVector image = d.count(q) ? d.at(q) * v : RationalVector{};
    for (const auto& y : image)
      if (y != 0) out.fail(tag + "element is not a cocycle");
    if (rank(RationalMatrix::from_dense({kernel[0], v})) != 1) out.fail(tag + "element does not span the kernel");
  }
  if (out.ok) out.why << "ker d_1 = span(s_{n-1} c_1^{n-1}) in degree 4n-4 for n = 3..6";
  return out;
}

Outcome criterion_4() {
  Outcome out;
  for (int m = 1; m <= 2; ++m)
    for (int n = m + 1; n <= 10; ++n) {
      const Page e1 = build_e1(family_pencils_p1(m, n), quiet());
      for (const auto& [pq, cell] : e1.cells)
        if (pq.first >= 3 && cell.dim > 0)
          out.fail("m=" + std::to_string(m) + " n=" + std::to_string(n) + " has a cell at p=" +
                   std::to_string(pq.first));
      if (!first_nonzero_composite(e1)) {
        const Page e2 = compute_e2(e1);
        log_euler("pencils-p1 m=" + std::to_string(m) + " n=" + std::to_string(n), e1, e2, out);
      }
    }
  if (out.ok) out.why << "no cells with p >= 3 for m = 1, 2 and n <= 10";
  return out;
}

Outcome criterion_5() {
  Outcome out;
  double at_2_8 = 0;
  for (int g = 1; g <= 2; ++g)
    for (int n = 2 * g; n <= 2 * g + 4; ++n) {
      const std::string tag = "g=" + std::to_string(g) + " n=" + std::to_string(n) + ": ";
      const auto t0 = Clock::now();
      const auto fam = family_pencils_curve(g, n);
      for (int p = 0; p <= fam.p_max; ++p) {
        const auto dims = SgnInvariantBasis(fam.slot_algebra, p).dims();
        GradedDims want;
        for (const auto& [deg, v] : oracle::curve_first_factor(g, p)) want.add(deg, v.get_ui());
        if (dims != want) out.fail(tag + "first factor at p=" + std::to_string(p) + " is " + dims.to_string());
      }
      const Page e1 = build_e1(fam, quiet());
      if (auto bad = first_nonzero_composite(e1))
        out.fail(tag + "d d != 0 at (" + std::to_string(bad->first) + ", " + std::to_string(bad->second) + ")");
      else
        log_euler("pencils-curve " + tag, e1, compute_e2(e1), out);
      if (g == 2 && n == 8) at_2_8 = seconds_since(t0);
    }
  if (at_2_8 >= 120.0) out.fail("g=2 n=8 took " + std::to_string(at_2_8) + " s");
  if (out.ok) out.why << "four-block counts and d d = 0; g=2 n=8 in " << at_2_8 << " s";
  return out;
}

Outcome criterion_6() {
  Outcome out;
  for (int n = 2; n <= 8; ++n) {
    JobConfig a = job("pencils-curve", n);
    a.g = 0;
    JobConfig b = job("pencils-p1", n);
    b.m = 1;
    for (JobConfig* c : {&a, &b}) {
      c->artifacts = {"e1", "e2", "betti"};
      c->labels = true;
    }
    const JobReport ra = run(a), rb = run(b);
    if (ra.pages != rb.pages) out.fail("n=" + std::to_string(n) + " pages differ");
    if (ra.betti != rb.betti) out.fail("n=" + std::to_string(n) + " Betti tables differ");
  }
  if (out.ok) out.why << "identical E1, E2 and Betti reports for n = 2..8";
  return out;
}

Outcome criterion_7() {
  Outcome out;
  for (int r = 1; r <= 4; ++r)
    for (int n = 0; n <= 6; ++n) {
      const auto fam = family_tuples(r, n);
      const Page e1 = build_e1(fam);
      log_euler("tuples r=" + std::to_string(r) + " n=" + std::to_string(n), e1, compute_e2(e1), out);
    }
  for (int n = 0; n <= 12; ++n) {
    const Page e1 = build_e1(family_uconf_plane(n));
    log_euler("uconf-plane n=" + std::to_string(n), e1, compute_e2(e1), out);
  }
  for (const auto& [instance, delta] : euler_log)
    if (delta != 0) out.fail("chi not conserved for " + instance);
  std::size_t general = 0;
  for (int chi = -2; chi <= 3; ++chi)
    for (int odd_shift = 0; odd_shift <= 1; ++odd_shift) {
      // Two tables per chi: the smallest one and one padded with a cancelling pair.
      GradedDims x{{0, 1}};
      if (chi < 1) x.add(1, 1 - chi);
      if (chi > 1) x.add(2, chi - 1);
      if (odd_shift) {
        x.add(3, 1);
        x.add(4, 1);
      }
      for (const auto convention : {CohomologyKind::CompactSupport, CohomologyKind::Ordinary})
        for (int n = 0; n <= 6; ++n) {
          const Page e1 = build_e1(family_uconf_general(x, n, convention));
          ++general;
          if (mpq_class(euler_characteristic(e1)) != oracle::generalized_binomial(chi, n))
            out.fail("uconf-general chi=" + std::to_string(chi) + " n=" + std::to_string(n));
        }
    }
  if (out.ok)
    out.why << euler_log.size() << " instances conserve chi; " << general << " uconf-general pages match C(chi, n)";
  return out;
}

Outcome criterion_8() {
  Outcome out;
  for (int n = 0; n <= 10; ++n) {
    GradedDims want;
    for (int k = 0; k <= n; ++k) want.add(2 * k, 1);
    if (macdonald_sym({{0, 1}, {2, 1}}, n) != want) out.fail("P^1, n=" + std::to_string(n));
  }
  for (int k = 0; k <= 20; ++k)
    if (macdonald_sym({{2, 1}}, k) != GradedDims({{2 * k, 1}})) out.fail("{2:1}, k=" + std::to_string(k));
  if (out.ok) out.why << "Sym^n P^1 for n <= 10 and Sym^k of {2:1} for k <= 20";
  return out;
}

Outcome criterion_9() {
  Outcome out;
  for (int N = 2; N <= 12; ++N) {
    GradedDims want;
    for (const auto& [d, c] : oracle::gaussian_binomial(N, 2)) want.add(2 * d, c.get_ui());
    if (grassmann_algebra(2, N)->betti() != want) out.fail("Poincare polynomial of G(2," + std::to_string(N) + ")");
  }
  for (int N = 2; N <= 8; ++N)
    if (!oracle::pieri_agrees(grassmann_algebra(2, N), N)) out.fail("Pieri mismatch in G(2," + std::to_string(N) + ")");
  if (out.ok) out.why << "Gaussian binomials N <= 12, Pieri products N <= 8";
  return out;
}

Outcome criterion_10() {
  Outcome out;
  const auto t0 = Clock::now();
  const StalkReport report = stalk_acyclicity_check(10);
  const double s = seconds_since(t0);
  if (!report.exact || report.levels.size() != 10) out.fail("not exact");
  for (const auto& level : report.levels)
    if (!level.exact || level.alternating_sum != oracle::alternating_binomial_sum(level.p).get_si())
      out.fail("p=" + std::to_string(level.p));
  if (s >= 1.0) out.fail("took " + std::to_string(s) + " s");
  if (out.ok) out.why << "exact for p <= 10 in " << s << " s";
  return out;
}

Outcome criterion_11() {
  Outcome out;
  for (int r = 2; r <= 4; ++r)
    for (int n = 3; n <= 6; ++n) {
      const auto b = betti_of_stratum(family_tuples(r, n));
      const GradedDims want{{0, 1}, {2 * r - 3, 1}};
      if (!b.dual || b.dual->dims != want)
        out.fail("r=" + std::to_string(r) + " n=" + std::to_string(n) + " got " +
                 (b.dual ? b.dual->dims.to_string() : "no dual table"));
    }
  if (out.ok) out.why << "dual support {0, 2r-3} for r = 2..4, n = 3..6";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 configuration-space Betti numbers", criterion_1},
      {"2 E2 collapse for pencils on P^1", criterion_2},
      {"3 kernel of d_1 for pencils on P^1", criterion_3},
      {"4 column vanishing for pencils on P^1", criterion_4},
      {"5 genus-g first factor and d d = 0", criterion_5},
      {"6 genus-zero reduction", criterion_6},
      {"7 Euler characteristic conservation", criterion_7},
      {"8 Macdonald symmetric products", criterion_8},
      {"9 Grassmannian ring", criterion_9},
      {"10 stalk acyclicity", criterion_10},
      {"11 r-tuple family", criterion_11},
  };
  int failed = 0;
  for (const auto& [name, body] : criteria) {
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o.ok = false;
      o.why << "exception: " << e.what();
    }
    std::cout << (o.ok ? "PASS " : "FAIL ") << name << " -- " << o.why.str() << std::endl;
    if (!o.ok) ++failed;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
