#pragma once

#include "qmle/baselines.hpp"
#include "qmle/bench.hpp"
#include "qmle/dataset_io.hpp"
#include "qmle/errors.hpp"
#include "qmle/hermitian.hpp"
#include "qmle/model.hpp"
#include "qmle/pauli.hpp"
#include "qmle/rng.hpp"
#include "qmle/smd.hpp"
#include "qmle/synthetic.hpp"
