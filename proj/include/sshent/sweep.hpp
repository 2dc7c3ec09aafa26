#pragma once

// Two-parameter sweeps: axis specifications, row-major result grids and a
// small worker pool that gathers results by point index, so the output is
// independent of the worker count.

#include "sshent/topology.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace sshent {

/// One swept parameter. `parameter` is "z", "J", "delta<s>" (1-based leg) or
/// several of those joined with '+' to tie them to the same value
/// (e.g. "delta1+delta3").
struct Axis {
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  std::vector<double> values() const {
    if (steps < 1) throw InvalidParameters("axis '" + parameter + "': steps must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
      v[static_cast<std::size_t>(i)] = (steps == 1) ? min : min + (max - min) * i / (steps - 1);
    }
    return v;
  }
};

namespace detail {

inline std::vector<std::string> split_tied(const std::string& name) {
  std::vector<std::string> parts;
  std::stringstream ss(name);
  std::string item;
  while (std::getline(ss, item, '+')) parts.push_back(item);
  return parts;
}

inline bool parse_delta_leg(const std::string& name, int& leg) {
  if (name.rfind("delta", 0) != 0 || name.size() == 5) return false;
  const std::string digits = name.substr(5);
  if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
  leg = std::stoi(digits);
  return true;
}

}  // namespace detail

/// True when `name` names a ladder parameter of `p`.
inline bool is_ladder_parameter(const LadderParams& p, const std::string& name) {
  const auto parts = detail::split_tied(name);
  if (parts.empty()) return false;
  for (const auto& part : parts) {
    int leg = 0;
    if (part == "z" || part == "J") continue;
    if (detail::parse_delta_leg(part, leg) && leg >= 1 && leg <= p.legs) continue;
    return false;
  }
  return true;
}

/// Set a (possibly tied) ladder parameter by name.
inline void set_ladder_parameter(LadderParams& p, const std::string& name, double value) {
  if (!is_ladder_parameter(p, name)) throw InvalidParameters("unknown ladder parameter '" + name + "'");
  for (const auto& part : detail::split_tied(name)) {
    int leg = 0;
    if (part == "z") {
      p.z = value;
    } else if (part == "J") {
      p.J = value;
    } else {
      detail::parse_delta_leg(part, leg);
      p.deltas[static_cast<std::size_t>(leg - 1)] = value;
    }
  }
}

/// Evaluate f(0..n-1) on `workers` threads; results land at their own index.
template <class F>
auto parallel_map(std::size_t n, unsigned workers, F&& f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<R> out(n);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) out[i] = f(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Row-major grid over two axes: the first axis varies slowest.
template <class T>
struct Grid2D {
  Axis first;
  Axis second;
  std::vector<double> first_values;
  std::vector<double> second_values;
  std::vector<std::optional<T>> cells;

  std::size_t rows() const { return first_values.size(); }
  std::size_t cols() const { return second_values.size(); }
  const std::optional<T>& at(std::size_t i, std::size_t j) const { return cells[i * cols() + j]; }
};

/// Sweep `f` over the two axes applied to a copy of `base`. Any sshent::Error
/// thrown at a point leaves that cell empty; it never aborts the sweep.
template <class T, class F>
Grid2D<T> sweep_grid(const LadderParams& base, const Axis& first, const Axis& second, F&& f,
                     unsigned workers = 1) {
  if (!is_ladder_parameter(base, first.parameter)) throw InvalidParameters("unknown axis '" + first.parameter + "'");
  if (!is_ladder_parameter(base, second.parameter)) throw InvalidParameters("unknown axis '" + second.parameter + "'");
  Grid2D<T> grid{first, second, first.values(), second.values(), {}};
  const std::size_t n = grid.rows() * grid.cols();
  grid.cells = parallel_map(n, workers, [&](std::size_t idx) -> std::optional<T> {
    LadderParams p = base;
    set_ladder_parameter(p, first.parameter, grid.first_values[idx / grid.cols()]);
    set_ladder_parameter(p, second.parameter, grid.second_values[idx % grid.cols()]);
    try {
      return std::optional<T>(f(p));
    } catch (const Error&) {
      return std::nullopt;
    }
  });
  return grid;
}

using PhaseGrid = Grid2D<int>;

/// Phase diagram of the winding invariant (Green's-function route). Gapless or
/// unresolved points are left undefined.
inline PhaseGrid phase_grid(const LadderParams& base, const Axis& first, const Axis& second,
                            SymmetryKind kind = SymmetryKind::S, int n_k = 256, unsigned workers = 1) {
  return sweep_grid<int>(
      base, first, second, [&](const LadderParams& p) { return winding_green(p, kind, n_k).value; }, workers);
}

}  // namespace sshent
