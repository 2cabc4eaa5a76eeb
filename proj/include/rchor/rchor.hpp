#pragma once

#include "rchor/atomic.hpp"
#include "rchor/causal.hpp"
#include "rchor/conformance.hpp"
#include "rchor/configuration.hpp"
#include "rchor/decoupled.hpp"
#include "rchor/error.hpp"
#include "rchor/explore.hpp"
#include "rchor/global_semantics.hpp"
#include "rchor/json_io.hpp"
#include "rchor/parser.hpp"
#include "rchor/process.hpp"
#include "rchor/projection.hpp"
#include "rchor/properties.hpp"
#include "rchor/report.hpp"
#include "rchor/script.hpp"
#include "rchor/swap.hpp"
#include "rchor/types.hpp"
