#pragma once

#include "anomaly.hpp"
#include "date.hpp"
#include "decimal.hpp"
#include "error.hpp"
#include "export.hpp"
#include "hypergraph.hpp"
#include "ingest.hpp"
#include "network.hpp"
#include "pipeline.hpp"
#include "profit.hpp"
#include "similarity.hpp"
#include "synth.hpp"
#include "types.hpp"
