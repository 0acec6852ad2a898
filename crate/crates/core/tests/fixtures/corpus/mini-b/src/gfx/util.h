#pragma once
#include <lumen/math.h>
