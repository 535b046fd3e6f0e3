#pragma once

// Umbrella header.

#include "basic.hpp"
#include "bimodule.hpp"
#include "checks.hpp"
#include "correspondence.hpp"
#include "cstar.hpp"
#include "dynamics.hpp"
#include "fixtures.hpp"
#include "inclusion.hpp"
#include "io/catalog.hpp"
#include "io/commands.hpp"
#include "io/json_codec.hpp"
#include "io/model_file.hpp"
#include "io/report.hpp"
#include "matkernel.hpp"
