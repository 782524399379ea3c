#pragma once

#include "palsum/digits.hpp"
#include "palsum/error.hpp"
#include "palsum/gadget.hpp"
#include "palsum/report.hpp"
#include "palsum/sieve.hpp"
#include "palsum/stats.hpp"
#include "palsum/sumset.hpp"
