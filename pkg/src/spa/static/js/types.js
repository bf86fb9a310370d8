/** JSON shapes returned by the checking service (POST /api/check). */
export {};
