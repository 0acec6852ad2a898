#pragma once
#include "../core/Types.h"
#include "Device.h"
