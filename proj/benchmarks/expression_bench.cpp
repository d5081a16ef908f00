#include <benchmark/benchmark.h>

#include <random>

#include "gazectl/expression.hpp"
#include "gazectl/profile.hpp"

namespace {

std::vector<gazectl::BlendShapeVector> random_vectors(std::size_t n) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<gazectl::BlendShapeVector> out(n);
  for (auto& v : out) {
    for (std::size_t i = 0; i < gazectl::kBlendShapeCount; ++i) v.set(i, u(rng));
  }
  return out;
}

void BM_EvalIntentions(benchmark::State& state) {
  const auto profile = gazectl::load_profile(GAZECTL_PROFILES_DIR "/wukong.yaml").value().profile;
  const auto vectors = random_vectors(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    auto active = gazectl::eval_intentions(profile.intentions, vectors[i++ & 1023]);
    benchmark::DoNotOptimize(gazectl::apply_priority_rules(profile.priority_rules, std::move(active)));
  }
}
BENCHMARK(BM_EvalIntentions);

void BM_ExpressionEngineStep(benchmark::State& state) {
  const auto profile = gazectl::load_profile(GAZECTL_PROFILES_DIR "/wukong.yaml").value().profile;
  gazectl::ExpressionEngine engine(profile.intentions, profile.priority_rules);
  const auto vectors = random_vectors(1024);
  std::int64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.step(vectors[static_cast<std::size_t>(t) & 1023], t));
    ++t;
  }
}
BENCHMARK(BM_ExpressionEngineStep);

}  // namespace
