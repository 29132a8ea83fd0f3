#pragma once

#include "gricean/errors.hpp"
#include "gricean/logspace.hpp"
#include "gricean/semantics.hpp"
#include "gricean/speakers.hpp"
#include "gricean/marginal.hpp"
#include "gricean/enttest.hpp"
#include "gricean/estimate.hpp"
#include "gricean/config.hpp"
#include "gricean/experiments.hpp"
