#pragma once

#include "graded_core.hpp"
#include "sym_coalgebra.hpp"
#include "forms.hpp"
#include "filtered_complexes.hpp"
#include "linfty.hpp"
#include "maurer_cartan.hpp"
#include "obstruction.hpp"
#include "cfo_engine.hpp"
#include "simplicial_mc.hpp"
