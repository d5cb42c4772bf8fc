#pragma once

#include "nckob/branches.hpp"
#include "nckob/errors.hpp"
#include "nckob/geodesic.hpp"
#include "nckob/metric.hpp"
#include "nckob/oracle.hpp"
#include "nckob/root.hpp"
#include "nckob/scalar.hpp"
