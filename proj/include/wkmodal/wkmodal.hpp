#pragma once

#include "algebra.hpp"
#include "decide.hpp"
#include "enumerate.hpp"
#include "errors.hpp"
#include "filtration.hpp"
#include "formula.hpp"
#include "kripke.hpp"
#include "matrix.hpp"
#include "model_io.hpp"
#include "parser.hpp"
#include "proof.hpp"
#include "systems.hpp"
#include "truth.hpp"
