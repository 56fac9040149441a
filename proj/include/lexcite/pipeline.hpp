#pragma once

#include "lexcite/pipeline/experiments.hpp"
#include "lexcite/pipeline/ingest.hpp"
#include "lexcite/pipeline/synth.hpp"
