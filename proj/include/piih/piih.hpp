#pragma once

#include "piih/algelem.hpp"
#include "piih/asympt.hpp"
#include "piih/asymseries.hpp"
#include "piih/diffpoly.hpp"
#include "piih/error.hpp"
#include "piih/fredholm.hpp"
#include "piih/hierarchy.hpp"
#include "piih/kernel.hpp"
#include "piih/laurent.hpp"
#include "piih/rational.hpp"
#include "piih/specfun.hpp"
