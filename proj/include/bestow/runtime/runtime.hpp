#pragma once

#include "bestow/runtime/actor.hpp"
#include "bestow/runtime/bestowed.hpp"
#include "bestow/runtime/future.hpp"
#include "bestow/runtime/locked.hpp"
#include "bestow/runtime/override.hpp"
