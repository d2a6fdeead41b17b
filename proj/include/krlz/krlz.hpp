#pragma once

#include "krlz/types.hpp"
#include "krlz/stats.hpp"
#include "krlz/fingerprint.hpp"
#include "krlz/periodicity.hpp"
#include "krlz/trie.hpp"
#include "krlz/suffix_tree.hpp"
#include "krlz/match_equal.hpp"
#include "krlz/match_short.hpp"
#include "krlz/block_period.hpp"
#include "krlz/match_long.hpp"
#include "krlz/longest_prefix.hpp"
#include "krlz/factorization.hpp"
#include "krlz/lz77.hpp"
#include "krlz/verify.hpp"
#include "krlz/oracles.hpp"
