#pragma once

#include "freshopt/config.hpp"
#include "freshopt/demand.hpp"
#include "freshopt/errors.hpp"
#include "freshopt/market.hpp"
#include "freshopt/optimizer.hpp"
#include "freshopt/oracle.hpp"
#include "freshopt/profit.hpp"
#include "freshopt/sweep.hpp"
