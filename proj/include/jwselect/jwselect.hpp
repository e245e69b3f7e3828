#pragma once

#include "jwselect/circuit.hpp"
#include "jwselect/errors.hpp"
#include "jwselect/gadgets.hpp"
#include "jwselect/pauli.hpp"
#include "jwselect/resources.hpp"
#include "jwselect/select.hpp"
#include "jwselect/simulator.hpp"
