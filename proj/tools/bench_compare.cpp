// Compares the serial reference paths against the OpenMP-parallel ones:
// batch tree edit distance over generated tree pairs, and full gold-file
// evaluation. Prints a timing table and verifies both paths agree.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mathcvt/eval.hpp"
#include "mathcvt/fixture.hpp"
#include "mathcvt/gold.hpp"
#include "mathcvt/ted.hpp"

using namespace mathcvt;

namespace {

ExprNode random_tree(std::mt19937& rng, int nodes) {
  static const char* labels[] = {"plus", "times", "divide", "power", "a", "b", "c", "x", "y", "1", "2"};
  std::uniform_int_distribution<int> label_pick(0, 10);
  ExprNode root(labels[label_pick(rng)], NodeKind::Generic);
  std::vector<ExprNode*> pool{&root};
  for (int i = 1; i < nodes; ++i) {
    std::uniform_int_distribution<size_t> parent_pick(0, pool.size() - 1);
    ExprNode* parent = pool[parent_pick(rng)];
    parent->children.emplace_back(labels[label_pick(rng)], NodeKind::Generic);
    // children vector may reallocate: rebuild the pool
    pool.clear();
    std::vector<ExprNode*> stack{&root};
    while (!stack.empty()) {
      ExprNode* n = stack.back();
      stack.pop_back();
      pool.push_back(n);
      for (auto& c : n->children) stack.push_back(&c);
    }
  }
  return root;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int pairs = argc > 1 ? std::atoi(argv[1]) : 2000;
  int tree_nodes = argc > 2 ? std::atoi(argv[2]) : 40;
  int threads = argc > 3 ? std::atoi(argv[3]) :
#ifdef _OPENMP
                           omp_get_max_threads();
#else
                           1;
#endif

  std::printf("tree edit distance batch: %d pairs, %d nodes per tree, %d threads\n", pairs,
              tree_nodes, threads);

  std::mt19937 rng(20240521);
  std::vector<ExprNode> trees;
  trees.reserve(static_cast<size_t>(pairs) * 2);
  for (int i = 0; i < pairs * 2; ++i) trees.push_back(random_tree(rng, tree_nodes));
  std::vector<std::pair<const ExprNode*, const ExprNode*>> work;
  for (int i = 0; i < pairs; ++i) work.emplace_back(&trees[2 * i], &trees[2 * i + 1]);

  CostModel cm = CostModel::unit();
  auto t0 = std::chrono::steady_clock::now();
  std::vector<double> serial = ted_batch(work, cm, {}, 1);
  double serial_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  std::vector<double> parallel = ted_batch(work, cm, {}, threads);
  double parallel_s = seconds_since(t0);

  bool agree = serial == parallel;
  std::printf("  serial   %8.3f s\n", serial_s);
  std::printf("  parallel %8.3f s   speedup %.2fx   results %s\n", parallel_s,
              parallel_s > 0 ? serial_s / parallel_s : 0.0, agree ? "identical" : "DIFFER");

  // end-to-end gold evaluation, serial vs parallel
  Pipeline pipeline = fixture_pipeline();
  auto fixtures = generate_fixtures();
  std::vector<GoldEntry> gold = parse_gold(fixtures.at("gold.jsonl"), pipeline.registry());

  EvalOptions opts;
  opts.jobs = 1;
  t0 = std::chrono::steady_clock::now();
  std::vector<EvalResult> r1 = run_eval(gold, {}, pipeline, opts);
  double eval_serial = seconds_since(t0);

  opts.jobs = threads;
  t0 = std::chrono::steady_clock::now();
  std::vector<EvalResult> r2 = run_eval(gold, {}, pipeline, opts);
  double eval_parallel = seconds_since(t0);

  bool eval_agree = r1.size() == r2.size();
  for (size_t i = 0; eval_agree && i < r1.size(); ++i)
    eval_agree = r1[i].entry_id == r2[i].entry_id && r1[i].converter == r2[i].converter &&
                 r1[i].presentation_distance == r2[i].presentation_distance &&
                 r1[i].success == r2[i].success;

  std::printf("gold evaluation: %zu entries\n", gold.size());
  std::printf("  serial   %8.3f s\n", eval_serial);
  std::printf("  parallel %8.3f s   speedup %.2fx   results %s\n", eval_parallel,
              eval_parallel > 0 ? eval_serial / eval_parallel : 0.0,
              eval_agree ? "identical" : "DIFFER");

  return agree && eval_agree ? 0 : 1;
}
