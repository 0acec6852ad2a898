#pragma once
#include "Resource.h"
