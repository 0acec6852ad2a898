#pragma once
#include "../core/Memory.h"
