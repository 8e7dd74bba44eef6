#include "apdakit/cli/self_check.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

#include "apdakit/common/rng.hpp"
#include "apdakit/diag/fd_check.hpp"
#include "apdakit/diag/stepsize_check.hpp"
#include "apdakit/kernels/kernels.hpp"
#include "apdakit/linop/linop.hpp"
#include "apdakit/linop/norms.hpp"
#include "apdakit/problems/generators.hpp"
#include "apdakit/prox/prox.hpp"
#include "apdakit/solvers/apda.hpp"

namespace apdakit::cli {

namespace {

constexpr std::uint64_t kSeed = 0xab5e11;

std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

CheckGroup check_adjoints() {
  CheckGroup group;
  group.name = "adjoint-consistency";
  group.worst_margin = std::numeric_limits<double>::infinity();
  Rng rng(kSeed);

  std::vector<linop::OperatorPtr> ops;
  {
    std::vector<double> dense(5 * 3);
    for (double& v : dense) v = rng.normal();
    ops.push_back(std::make_shared<linop::DenseOperator>(5, 3, dense));
    ops.push_back(problems::make_sparse_gaussian(6, 4, 0.5, rng.next_u64()));
    ops.push_back(std::make_shared<linop::IdentityOperator>(5));
    ops.push_back(std::make_shared<linop::ZeroOperator>(4, 6));
    ops.push_back(std::make_shared<linop::MaskOperator>(
        6, std::vector<std::size_t>{0, 2, 3}));
    ops.push_back(std::make_shared<linop::GradientOperator2D>(4, 5));
    ops.push_back(std::make_shared<linop::CompositionOperator>(
        std::make_shared<linop::MaskOperator>(
            40, std::vector<std::size_t>{1, 7, 19, 23, 35}),
        std::make_shared<linop::GradientOperator2D>(4, 5)));
  }

  bool ok = true;
  for (const auto& op : ops) {
    for (int probe = 0; probe < 100; ++probe) {
      const auto x = random_vector(op->in_dim(), rng);
      const auto y = random_vector(op->out_dim(), rng);
      const auto ax = op->apply(x);
      const auto aty = op->adjoint_apply(y);
      const double lhs = kernels::dot(ax, y);
      const double rhs = kernels::dot(x, aty);
      const double scale =
          1.0 + std::sqrt(kernels::nrm2_sq(ax)) * std::sqrt(kernels::nrm2_sq(y));
      const double margin = 1e-10 * scale - std::fabs(lhs - rhs);
      group.worst_margin = std::min(group.worst_margin, margin);
      if (margin < 0.0) ok = false;
      ++group.checks;
    }
  }
  group.passed = ok;
  return group;
}

CheckGroup check_moreau() {
  CheckGroup group;
  group.name = "moreau-identity";
  group.worst_margin = std::numeric_limits<double>::infinity();
  Rng rng(kSeed + 1);

  const std::vector<prox::Regularizer> regs = {
      prox::Regularizer::l1(1.3),
      prox::Regularizer::group_l21(0.8, 6),
      prox::Regularizer::zero(),
  };
  bool ok = true;
  for (const auto& reg : regs) {
    const std::size_t dim =
        reg.kind() == prox::RegularizerKind::kGroupL21 ? 12 : 9;
    for (int probe = 0; probe < 1000; ++probe) {
      const double sigma = std::pow(10.0, rng.uniform(-3.0, 3.0));
      auto z = random_vector(dim, rng);
      for (double& v : z) v *= 5.0;
      const auto direct = prox::prox_g_conj(reg, sigma, z);
      const auto via_moreau = prox::prox_conj_via_moreau(reg, sigma, z);
      const double err = std::sqrt(kernels::diff_nrm2_sq(direct, via_moreau));
      const double margin =
          1e-10 * (1.0 + std::sqrt(kernels::nrm2_sq(z))) - err;
      group.worst_margin = std::min(group.worst_margin, margin);
      if (margin < 0.0) ok = false;
      ++group.checks;
    }
  }
  group.passed = ok;
  return group;
}

CheckGroup check_gradients() {
  CheckGroup group;
  group.name = "gradient-oracles";
  group.worst_margin = std::numeric_limits<double>::infinity();
  Rng rng(kSeed + 2);

  std::vector<problems::ObjectivePtr> objectives;
  {
    auto logistic =
        problems::generate_synthetic_logistic(30, 10, rng.next_u64());
    objectives.push_back(std::make_shared<problems::LogisticObjective>(
        logistic.features, logistic.labels));

    const Image img = problems::make_blocky_image(4, 5, 2, rng.next_u64());
    const auto inpaint =
        problems::make_inpainting_problem(img, 0.6, 1e-2, rng.next_u64());
    objectives.push_back(inpaint.f);

    const auto phase = problems::make_phase_retrieval_problem(
        img, 40, 0.4, 0.1, 1.0, rng.next_u64());
    objectives.push_back(phase.f);

    const auto quad =
        problems::make_quadratic_testproblem(8, 3, 0.7, 4.0, rng.next_u64());
    objectives.push_back(quad.f);
  }

  bool ok = true;
  for (const auto& obj : objectives) {
    for (int probe = 0; probe < 20; ++probe) {
      const auto x = random_vector(obj->dim(), rng);
      const double err = diag::gradient_check_error(*obj, x);
      const double margin = 1e-5 - err;
      group.worst_margin = std::min(group.worst_margin, margin);
      if (margin < 0.0) ok = false;
      ++group.checks;
    }
  }
  group.passed = ok;
  return group;
}

CheckGroup check_stepsizes(bool inject_fault) {
  CheckGroup group;
  group.name = "stepsize-invariants";
  group.worst_margin = std::numeric_limits<double>::infinity();

  // scalar adaptive recurrence (A = 0, g = 0) and the quadratic
  // certificate instance
  std::vector<diag::IterationRecord> scalar_trace;
  {
    problems::SaddleProblem scalar;
    scalar.f = std::make_shared<problems::QuadraticObjective>(
        1, std::vector<double>{1.0}, std::vector<double>{0.0});
    scalar.A = std::make_shared<linop::ZeroOperator>(1, 1);
    scalar.reg = prox::Regularizer::zero();
    solvers::ApdaConfig config;
    config.beta = 1.0;
    config.max_iters = 300;
    config.norm_A = 0.0;
    config.invariants = solvers::InvariantMode::kOff;
    const std::vector<double> x0{1.0}, y0{0.0};
    solvers::apda_run(scalar, x0, y0, config,
                      [&](const diag::IterationRecord& rec,
                          const solvers::SolverView&) {
                        scalar_trace.push_back(rec);
                      });
    const auto report = diag::check_stepsize_invariants(
        scalar_trace, solvers::ApdaVariant::kBase, config.beta, config.c, 0.0);
    group.checks += report.records_checked;
    if (!report.ok()) {
      group.detail = "scalar recurrence: " + report.first_violation;
      group.worst_margin = std::min(group.worst_margin, -1.0);
    }
    group.worst_margin = std::min(group.worst_margin, report.worst_tl_margin);
  }

  {
    const auto quad = problems::make_quadratic_testproblem(8, 3, 0.5, 5.0, 21);
    solvers::ApdaConfig config;
    config.beta = 1.0;
    config.max_iters = 500;
    config.invariants = solvers::InvariantMode::kOff;
    config.norm_A = -1.0;
    std::vector<diag::IterationRecord> trace;
    const std::vector<double> x0(8, 0.0), y0(3, 0.0);
    solvers::apda_run(quad, x0, y0, config,
                      [&](const diag::IterationRecord& rec,
                          const solvers::SolverView&) { trace.push_back(rec); });
    const double norm_a = linop::operator_norm(*quad.A);
    const auto report = diag::check_stepsize_invariants(
        trace, solvers::ApdaVariant::kBase, config.beta, config.c, norm_a);
    group.checks += report.records_checked;
    if (!report.ok()) {
      if (group.detail.empty())
        group.detail = "quadratic instance: " + report.first_violation;
      group.worst_margin = std::min(group.worst_margin, -1.0);
    }
    group.worst_margin = std::min(group.worst_margin, report.worst_tl_margin);
  }

  {
    // quartic x^4/4 through a single zero measurement: the local estimate
    // decays along the run, the growth cap binds, and the injected fault
    // becomes visible here
    problems::SaddleProblem quartic;
    auto stack = std::make_shared<linop::CsrOperator>(
        1, 1, std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{0},
        std::vector<double>{1.0});
    quartic.f = std::make_shared<problems::PhaseRetrievalObjective>(
        stack, std::vector<double>{0.0});
    quartic.A = std::make_shared<linop::ZeroOperator>(1, 1);
    quartic.reg = prox::Regularizer::zero();

    solvers::ApdaConfig config;
    config.beta = 1.0;
    config.norm_A = 0.0;
    config.max_iters = 300;
    config.invariants = solvers::InvariantMode::kOff;
    config.fault_growth_cap = inject_fault;
    std::vector<diag::IterationRecord> trace;
    const std::vector<double> x0{1.0}, y0{0.0};
    solvers::apda_run(quartic, x0, y0, config,
                      [&](const diag::IterationRecord& rec,
                          const solvers::SolverView&) { trace.push_back(rec); });
    const auto report = diag::check_stepsize_invariants(
        trace, solvers::ApdaVariant::kBase, config.beta, config.c, 0.0);
    group.checks += report.records_checked;
    if (!report.ok()) {
      if (group.detail.empty())
        group.detail = "quartic recurrence: " + report.first_violation;
      group.worst_margin = std::min(group.worst_margin, -1.0);
    }
    group.worst_margin = std::min(group.worst_margin, report.worst_tl_margin);
  }

  group.passed = group.worst_margin >= 0.0;
  return group;
}

CheckGroup check_energy_bound() {
  CheckGroup group;
  group.name = "energy-bound";
  group.worst_margin = std::numeric_limits<double>::infinity();

  const auto quad = problems::make_quadratic_testproblem(10, 4, 0.5, 5.0, 7);
  solvers::ApdaConfig config;
  config.beta = 1.0;
  config.max_iters = 2000;
  Rng rng(kSeed + 3);
  const auto x0 = random_vector(10, rng);
  const auto y0 = random_vector(4, rng);

  double bound = 0.0;
  bool ok = true;
  solvers::apda_run(
      quad, x0, y0, config,
      [&](const diag::IterationRecord& rec, const solvers::SolverView& view) {
        if (rec.k == 1) {
          // M = ||x1 - x*||^2 + (1/beta)||y1 - y*||^2 + 1/2 ||x1 - x0||^2
          bound = kernels::diff_nrm2_sq(view.x, quad.reference->x) +
                  kernels::diff_nrm2_sq(view.y, quad.reference->y) / config.beta +
                  0.5 * kernels::diff_nrm2_sq(view.x, view.x_prev);
        }
        const double margin = bound + 1e-8 - *rec.energy;
        group.worst_margin = std::min(group.worst_margin, margin);
        if (margin < 0.0) ok = false;
        ++group.checks;
      });
  group.passed = ok;
  return group;
}

}  // namespace

bool SelfCheckReport::all_passed() const {
  for (const CheckGroup& g : groups)
    if (!g.passed) return false;
  return true;
}

SelfCheckReport run_self_check(bool inject_stepsize_fault) {
  SelfCheckReport report;
  report.groups.push_back(check_adjoints());
  report.groups.push_back(check_moreau());
  report.groups.push_back(check_gradients());
  report.groups.push_back(check_stepsizes(inject_stepsize_fault));
  report.groups.push_back(check_energy_bound());
  return report;
}

void print_report(std::ostream& out, const SelfCheckReport& report) {
  for (const CheckGroup& g : report.groups) {
    out << (g.passed ? "[PASS] " : "[FAIL] ") << g.name << ": " << g.checks
        << " checks, worst margin " << g.worst_margin;
    if (!g.detail.empty()) out << " (" << g.detail << ")";
    out << '\n';
  }
  out << (report.all_passed() ? "self-check OK" : "self-check FAILED") << '\n';
}

}  // namespace apdakit::cli
