// SPDX-License-Identifier: Apache-2.0

#ifndef TWINMDS_TWINMDS_HPP
#define TWINMDS_TWINMDS_HPP

#include "twinmds/bounds.hpp"
#include "twinmds/combinatorics.hpp"
#include "twinmds/eavesdrop.hpp"
#include "twinmds/error.hpp"
#include "twinmds/field.hpp"
#include "twinmds/io.hpp"
#include "twinmds/mds_code.hpp"
#include "twinmds/secure.hpp"
#include "twinmds/storage_sim.hpp"
#include "twinmds/twin.hpp"

#endif  // TWINMDS_TWINMDS_HPP
