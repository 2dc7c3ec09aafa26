#pragma once

#include "sshent/core.hpp"
#include "sshent/model.hpp"
#include "sshent/topology.hpp"
#include "sshent/sweep.hpp"
#include "sshent/gaussian.hpp"
#include "sshent/entanglement.hpp"
#include "sshent/bell.hpp"
#include "sshent/fock.hpp"
