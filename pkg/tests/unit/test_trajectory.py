#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Tests for the trajectory module."""

import logging
from unittest import TestCase

import numpy as np

from fdde.errors import DomainError
from fdde.history import ConstantHistory, RampHistory
from fdde.trajectory import Trajectory, delayed_value, floor_index, grid_size

# disconnect logging for testing
logging.captureWarnings(True)
logging.disable(logging.CRITICAL)


class TestGrid(TestCase):
    """Test grid sizing and exact floor indices."""

    def test_grid_size(self) -> None:
        """should round T/h up, ignoring roundoff"""
        self.assertEqual(grid_size(1.0, 0.1), 10)
        self.assertEqual(grid_size(0.3, 0.1), 3)
        self.assertEqual(grid_size(1.05, 0.1), 11)
        self.assertEqual(grid_size(0.0, 0.1), 0)

    def test_grid_size_domain(self) -> None:
        """should reject non-positive steps and negative final times"""
        with self.assertRaises(DomainError):
            grid_size(1.0, 0.0)
        with self.assertRaises(DomainError):
            grid_size(-1.0, 0.1)

    def test_floor_index(self) -> None:
        """should give the largest j with j·h <= x"""
        self.assertEqual(floor_index(0.9, 0.3), 3)
        self.assertEqual(floor_index(0.89, 0.3), 2)
        self.assertEqual(floor_index(2.0, 2.0**-8), 512)
        for x in np.linspace(0.0, 3.0, 301):
            j = floor_index(x, 0.1)
            self.assertTrue(j * 0.1 <= x < (j + 1) * 0.1)


class TestTrajectory(TestCase):
    """Test growing, freezing and querying trajectories."""

    def setUp(self) -> None:
        """Create a trajectory with three computed nodes."""
        self.traj = Trajectory.start(RampHistory(1.0, 0.5), 0.1, 1.0)
        for value in (2.0, 4.0):
            self.traj.advance(value)

    def test_start(self) -> None:
        """should hold only y(0) = φ(0)"""
        traj = Trajectory.start(ConstantHistory(3.0, 1.0), 0.25, 1.0)
        self.assertEqual(len(traj), 5)
        self.assertEqual(traj.n_steps, 4)
        self.assertEqual(traj.frontier, 0)
        self.assertEqual(traj.values[0], 3.0)
        self.assertTrue(np.isnan(traj.values[1:]).all())

    def test_nodes(self) -> None:
        """should return stored values at grid nodes"""
        self.assertEqual(self.traj(0.0), 1.0)
        self.assertEqual(self.traj(0.1), 2.0)
        self.assertEqual(self.traj(0.2), 4.0)
        self.assertEqual(self.traj(0.1 + 0.1), 4.0)

    def test_interpolation(self) -> None:
        """should interpolate linearly between nodes"""
        self.assertAlmostEqual(self.traj(0.05), 1.5)
        self.assertAlmostEqual(self.traj(0.175), 3.5)

    def test_history(self) -> None:
        """should read the history before 0"""
        self.assertEqual(delayed_value(self.traj, -0.25), 0.5)
        self.assertEqual(delayed_value(self.traj, -0.5), 0.0)
        with self.assertRaises(DomainError):
            delayed_value(self.traj, -0.6)

    def test_frontier(self) -> None:
        """should never read beyond the computed frontier"""
        with self.assertRaises(DomainError):
            self.traj(0.25)
        with self.assertRaises(DomainError):
            self.traj(0.3)

    def test_freeze(self) -> None:
        """should refuse new nodes once frozen or complete"""
        traj = Trajectory.start(ConstantHistory(1.0, 1.0), 0.5, 1.0)
        traj.advance(2.0)
        traj.advance(3.0)
        with self.assertRaises(DomainError):
            traj.advance(4.0)
        self.traj.freeze()
        self.assertTrue(self.traj.frozen)
        with self.assertRaises(DomainError):
            self.traj.advance(5.0)

    def test_from_values(self) -> None:
        """should build a frozen trajectory of the right length"""
        traj = Trajectory.from_values(ConstantHistory(1.0, 1.0), 0.5, 1.0, [1.0, 0.5, 0.25])
        self.assertTrue(traj.frozen)
        self.assertEqual(traj(1.0), 0.25)
        np.testing.assert_array_equal(traj.times, [0.0, 0.5, 1.0])
        self.assertEqual(list(traj.rows())[1], {"t": 0.5, "y": 0.5})
        with self.assertRaises(DomainError):
            Trajectory.from_values(ConstantHistory(1.0, 1.0), 0.5, 1.0, [1.0, 0.5])
