import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    environment: 'node',
    // The lifecycle test runs a real service process; give it room.
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
