#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


"""Level crossings of smooth-plus-jump processes: simulation, counting and Rice formulas."""

VERSION = '0.1'
"""crossings-lab version"""
