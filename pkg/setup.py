#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

from setuptools import setup, find_namespace_packages

setup(name='crossings-lab',
      packages=find_namespace_packages(include=['crossings_lab*']))
