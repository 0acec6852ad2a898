#pragma once
#include "core/Types.h"
