// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// Umbrella header: pulls in the whole library.

#pragma once

#include "asymptotics.hpp"
#include "cli.hpp"
#include "config.hpp"
#include "fields.hpp"
#include "format.hpp"
#include "geometry.hpp"
#include "jet.hpp"
#include "linalg.hpp"
#include "quadrature.hpp"
#include "verify.hpp"
