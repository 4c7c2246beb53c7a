#pragma once

#include "intent_miner/annotation.hpp"
#include "intent_miner/clustering.hpp"
#include "intent_miner/config.hpp"
#include "intent_miner/corpus.hpp"
#include "intent_miner/error.hpp"
#include "intent_miner/extraction.hpp"
#include "intent_miner/metrics.hpp"
#include "intent_miner/parallel.hpp"
#include "intent_miner/pipeline.hpp"
#include "intent_miner/scoring.hpp"
#include "intent_miner/sentiment.hpp"
#include "intent_miner/stopwords.hpp"
#include "intent_miner/text.hpp"
#include "intent_miner/yake.hpp"
