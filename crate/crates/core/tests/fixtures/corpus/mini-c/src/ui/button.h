#pragma once
#include "widget.h"
