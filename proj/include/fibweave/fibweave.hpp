#pragma once

#include "fibweave/bigfloat.hpp"
#include "fibweave/complex.hpp"
#include "fibweave/mat2.hpp"
#include "fibweave/fib_model.hpp"
#include "fibweave/convergent_search.hpp"
#include "fibweave/gate_word.hpp"
#include "fibweave/weave.hpp"
#include "fibweave/chain_sim.hpp"
#include "fibweave/distill.hpp"
#include "fibweave/pipeline.hpp"
