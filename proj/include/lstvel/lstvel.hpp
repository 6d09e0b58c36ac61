#pragma once

#include "core/account.hpp"
#include "core/amount.hpp"
#include "core/errors.hpp"
#include "core/pool_math.hpp"
#include "core/types.hpp"

#include "shares/conversion.hpp"
#include "shares/reconstruct.hpp"
#include "shares/state_series.hpp"
#include "shares/supply.hpp"

#include "velocity/account_state.hpp"
#include "velocity/replay.hpp"
#include "velocity/sampling.hpp"

#include "analytics/balances.hpp"
#include "analytics/categories.hpp"
#include "analytics/decompose.hpp"
#include "analytics/time_index.hpp"

#include "synth/generator.hpp"
#include "synth/oracle.hpp"
#include "synth/rng.hpp"
#include "synth/selfcheck.hpp"

#include "io/csv.hpp"
#include "io/fetch.hpp"
#include "io/ledger_csv.hpp"
#include "io/rpc.hpp"
#include "io/series_csv.hpp"
