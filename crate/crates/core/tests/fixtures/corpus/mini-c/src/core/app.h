#pragma once
#include "types.h"
#include "platform.h"
