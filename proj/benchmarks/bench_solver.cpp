#include <benchmark/benchmark.h>

#include "porofem/assembly.hpp"
#include "porofem/manufactured.hpp"
#include "porofem/stepper.hpp"

using namespace porofem;

namespace {

Mesh unit_mesh(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  return Mesh::build_rect({0.0, 1.0, 0.0, 1.0}, n, n);
}

void BM_AssembleElasticity(benchmark::State& state) {
  const Mesh mesh = unit_mesh(state);
  const Spaces sp(mesh);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_elasticity(sp.p2v, 10.0));
  state.counters["dofs"] = sp.p2v.num_dofs();
}
BENCHMARK(BM_AssembleElasticity)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FactorizeStokes(benchmark::State& state) {
  const Mesh mesh = unit_mesh(state);
  const Spaces sp(mesh);
  BlockSystem bs;
  bs.add_field("tau", sp.p2v.num_dofs());
  bs.add_field("delta", sp.p1.num_dofs());
  bs.add_block("tau", "tau", assemble_elasticity(sp.p2v, 10.0));
  const SparseMatrix B = assemble_div(sp.p2v, sp.p1);
  bs.add_block("delta", "tau", B);
  bs.add_block("tau", "delta", SparseMatrix(B.transpose()));
  bs.add_block("delta", "delta", assemble_mass(sp.p1), -0.1);
  SparseMatrix A = bs.assemble();
  std::vector<int> fixed;
  for (int node : sp.p2v.boundary_nodes(std::span<const BoundaryFacet>(mesh.boundary_facets()))) {
    fixed.push_back(sp.p2v.dof(node, 0));
    fixed.push_back(sp.p2v.dof(node, 1));
  }
  const ConstrainedOperator op(A, fixed);
  for (auto _ : state) benchmark::DoNotOptimize(DirectSolver(op.matrix()));
  state.counters["unknowns"] = static_cast<double>(A.rows());
}
BENCHMARK(BM_FactorizeStokes)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_TimeStep(benchmark::State& state) {
  const ProblemCase c = test1_case();
  const Mesh mesh = unit_mesh(state);
  SchemeConfig cfg;
  cfg.theta = static_cast<int>(state.range(1));
  const Stepper st(c, mesh, cfg);
  State s = st.initial_state();
  for (auto _ : state) {
    if (s.step == st.num_steps()) s = st.initial_state();
    st.advance(s);
  }
}
BENCHMARK(BM_TimeStep)->Args({16, 1})->Args({16, 0})->Args({32, 1})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
