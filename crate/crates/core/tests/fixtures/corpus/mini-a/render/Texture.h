#pragma once
#include "Device.h"
#include "Resource.h"
