#pragma once
#include "util.h"
#include "collision/shape.h"
