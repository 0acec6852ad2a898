#pragma once
#include "scene/graph.h"
#include "physics/world.h"
