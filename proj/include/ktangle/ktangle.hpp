#pragma once

#include "ktangle/bipartite.hpp"
#include "ktangle/channels.hpp"
#include "ktangle/classify.hpp"
#include "ktangle/fourqubit.hpp"
#include "ktangle/labels.hpp"
#include "ktangle/mat2.hpp"
#include "ktangle/oracle.hpp"
#include "ktangle/tangle.hpp"
