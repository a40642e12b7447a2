// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermicert/cli.hpp"

int main(int argc, char** argv) { return fermicert::cli_main(argc, argv); }
