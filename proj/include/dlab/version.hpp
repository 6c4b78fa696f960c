#pragma once

#define DLAB_VERSION "0.1.0"
