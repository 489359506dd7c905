#pragma once

#include "circuit.hpp"
#include "error.hpp"
#include "estimator.hpp"
#include "fabric.hpp"
#include "generator.hpp"
#include "iig.hpp"
#include "mapper.hpp"
#include "qodg.hpp"
#include "report.hpp"
