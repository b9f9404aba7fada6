#pragma once

#include "quditrep/channels.hpp"
#include "quditrep/config.hpp"
#include "quditrep/dataset.hpp"
#include "quditrep/errors.hpp"
#include "quditrep/explorer.hpp"
#include "quditrep/math.hpp"
#include "quditrep/oracle.hpp"
#include "quditrep/presets.hpp"
#include "quditrep/qecc.hpp"
#include "quditrep/statistics.hpp"
#include "quditrep/validation.hpp"
#include "quditrep/version.hpp"
