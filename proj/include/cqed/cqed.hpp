#pragma once

#include "cqed/analysis.hpp"
#include "cqed/capmatrix.hpp"
#include "cqed/coupling.hpp"
#include "cqed/design_rules.hpp"
#include "cqed/device.hpp"
#include "cqed/errors.hpp"
#include "cqed/inverse_fit.hpp"
#include "cqed/linalg.hpp"
#include "cqed/resonator.hpp"
#include "cqed/result.hpp"
#include "cqed/squid.hpp"
#include "cqed/transmon.hpp"
#include "cqed/units.hpp"
