/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv)
{
  return leximax::cli::run({argv, argv + argc}, std::cout, std::cerr);
}
