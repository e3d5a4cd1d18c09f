#pragma once

#include "scribetok/baselines.hpp"
#include "scribetok/bpe.hpp"
#include "scribetok/chain.hpp"
#include "scribetok/codec.hpp"
#include "scribetok/error.hpp"
#include "scribetok/ink.hpp"
#include "scribetok/io.hpp"
#include "scribetok/metrics.hpp"
#include "scribetok/scribe.hpp"
#include "scribetok/smooth.hpp"

namespace scribetok {
inline constexpr const char* kVersion = "0.1.0";
}  // namespace scribetok
