#pragma once

#include <clopa/attack_tree.hpp>
#include <clopa/codesign.hpp>
#include <clopa/core.hpp>
#include <clopa/design_space.hpp>
#include <clopa/engine.hpp>
#include <clopa/error.hpp>
#include <clopa/io.hpp>
#include <clopa/oracle.hpp>
