#pragma once

#include "ebt/integer.hpp"
#include "ebt/matrix.hpp"
#include "ebt/smith.hpp"
#include "ebt/presented_group.hpp"
#include "ebt/characters.hpp"
#include "ebt/expression.hpp"
#include "ebt/parse.hpp"
#include "ebt/birational.hpp"
#include "ebt/verify.hpp"
#include "ebt/lattice.hpp"
#include "ebt/subdivision.hpp"
#include "ebt/psi.hpp"
#include "ebt/hecke.hpp"
#include "ebt/serialization.hpp"
