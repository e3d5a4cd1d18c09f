#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "scribetok/error.hpp"
#include "scribetok/ink.hpp"

namespace scribetok {

/// Reconstruction post-processing knobs. Defaults are the values used for
/// ScribeTokens at a grid spacing of 8.
struct PostprocessParams {
  int window = 7;
  int polyorder = 3;
  int downsample = 2;
};

namespace detail {

inline void require_savgol_params(int window, int polyorder) {
  if (window <= 0 || window % 2 == 0) {
    throw Error(ErrorCode::InvalidParams,
                "Savitzky-Golay window must be odd and positive, got " + std::to_string(window));
  }
  if (polyorder < 0 || polyorder >= window) {
    throw Error(ErrorCode::InvalidParams, "polynomial order must satisfy 0 <= k < window, got k=" +
                                              std::to_string(polyorder));
  }
}

}  // namespace detail

/// Precomputed least-squares weights for one (window, polyorder) pair.
///
/// weights(t) is the row that evaluates the degree-k fit of a length-w window
/// at offset t in [-m, m] from the window center (m = (w-1)/2). Rows come from
/// a thin QR of the window's Vandermonde matrix: for A = QR the evaluation
/// row is Q * R^-T * [1, t, ..., t^k].
class SavgolKernel {
 public:
  SavgolKernel(int window, int polyorder) : window_(window), polyorder_(polyorder) {
    detail::require_savgol_params(window, polyorder);
    const int half = window / 2;
    const auto cols = static_cast<std::size_t>(polyorder + 1);
    const auto rows = static_cast<std::size_t>(window);
    const double scale = half > 0 ? static_cast<double>(half) : 1.0;

    // Column-major Vandermonde on the scaled abscissa u = x / half.
    std::vector<double> q(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const double u = (static_cast<double>(r) - half) / scale;
      double pw = 1.0;
      for (std::size_t c = 0; c < cols; ++c) {
        q[c * rows + r] = pw;
        pw *= u;
      }
    }
    // Modified Gram-Schmidt, applied twice for orthogonality at full precision.
    std::vector<double> rmat(cols * cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t p = 0; p < c; ++p) {
          double dot = 0.0;
          for (std::size_t r = 0; r < rows; ++r) dot += q[p * rows + r] * q[c * rows + r];
          for (std::size_t r = 0; r < rows; ++r) q[c * rows + r] -= dot * q[p * rows + r];
          rmat[p * cols + c] += dot;
        }
      }
      double norm = 0.0;
      for (std::size_t r = 0; r < rows; ++r) norm += q[c * rows + r] * q[c * rows + r];
      norm = std::sqrt(norm);
      rmat[c * cols + c] = norm;
      for (std::size_t r = 0; r < rows; ++r) q[c * rows + r] /= norm;
    }

    weights_.assign(rows * rows, 0.0);
    std::vector<double> v(cols);
    std::vector<double> y(cols);
    for (std::size_t t = 0; t < rows; ++t) {
      const double u = (static_cast<double>(t) - half) / scale;
      double pw = 1.0;
      for (std::size_t c = 0; c < cols; ++c) {
        v[c] = pw;
        pw *= u;
      }
      // R^T y = v, forward substitution.
      for (std::size_t i = 0; i < cols; ++i) {
        double acc = v[i];
        for (std::size_t j = 0; j < i; ++j) acc -= rmat[j * cols + i] * y[j];
        y[i] = acc / rmat[i * cols + i];
      }
      for (std::size_t r = 0; r < rows; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += q[c * rows + r] * y[c];
        weights_[t * rows + r] = acc;
      }
    }
  }

  int window() const { return window_; }
  int polyorder() const { return polyorder_; }

  /// Weights for evaluating at `offset` in [-m, m] relative to the center.
  std::span<const double> weights(int offset) const {
    const auto w = static_cast<std::size_t>(window_);
    const auto row = static_cast<std::size_t>(offset + window_ / 2);
    return {weights_.data() + row * w, w};
  }

  /// Sequences shorter than the window pass through unchanged.
  std::vector<double> apply(std::span<const double> values) const {
    const auto n = values.size();
    const auto w = static_cast<std::size_t>(window_);
    std::vector<double> out(values.begin(), values.end());
    if (n < w) return out;
    const int half = window_ / 2;

    auto evaluate = [&](std::size_t start, int offset) {
      const auto h = weights(offset);
      double acc = 0.0;
      for (std::size_t j = 0; j < w; ++j) acc += h[j] * values[start + j];
      return acc;
    };
    for (int i = 0; i < half; ++i) out[static_cast<std::size_t>(i)] = evaluate(0, i - half);
    for (std::size_t i = static_cast<std::size_t>(half); i + static_cast<std::size_t>(half) < n; ++i) {
      out[i] = evaluate(i - static_cast<std::size_t>(half), 0);
    }
    const std::size_t last_start = n - w;
    for (int i = 1; i <= half; ++i) {
      out[n - 1 - static_cast<std::size_t>(half - i)] = evaluate(last_start, i);
    }
    return out;
  }

 private:
  int window_;
  int polyorder_;
  std::vector<double> weights_;
};

inline std::vector<double> savgol_filter(std::span<const double> values, int window, int polyorder) {
  return SavgolKernel(window, polyorder).apply(values);
}

/// Keeps indices 0, d, 2d, ... plus the final point.
template <typename P>
std::vector<P> downsample_stroke(const std::vector<P>& stroke, int d) {
  if (d < 1) throw Error(ErrorCode::InvalidParams, "downsample factor must be >= 1");
  if (d == 1 || stroke.size() <= 2) return stroke;
  std::vector<P> out;
  out.reserve(stroke.size() / static_cast<std::size_t>(d) + 2);
  const auto step = static_cast<std::size_t>(d);
  for (std::size_t i = 0; i < stroke.size(); i += step) out.push_back(stroke[i]);
  if ((stroke.size() - 1) % step != 0) out.push_back(stroke.back());
  return out;
}

inline void validate(const PostprocessParams& p) {
  detail::require_savgol_params(p.window, p.polyorder);
  if (p.downsample < 1) throw Error(ErrorCode::InvalidParams, "downsample factor must be >= 1");
}

/// Per stroke: downsample, then smooth x and y independently.
inline RawInk postprocess_ink(const RawInk& ink, const PostprocessParams& params) {
  validate(params);
  const SavgolKernel kernel(params.window, params.polyorder);
  RawInk out;
  out.strokes.reserve(ink.strokes.size());
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& stroke : ink.strokes) {
    Stroke thinned = downsample_stroke(stroke, params.downsample);
    xs.clear();
    ys.clear();
    for (const auto& p : thinned) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    const auto sx = kernel.apply(xs);
    const auto sy = kernel.apply(ys);
    for (std::size_t i = 0; i < thinned.size(); ++i) thinned[i] = {sx[i], sy[i]};
    out.strokes.push_back(std::move(thinned));
  }
  return out;
}

}  // namespace scribetok
