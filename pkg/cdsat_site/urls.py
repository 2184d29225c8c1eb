"""
URL configuration for the cdsat_site project.

The solve endpoint and run history live at the root, benchmark records
under /bench/.
"""

from django.contrib import admin
from django.urls import include, path

urlpatterns = [
    path("admin/", admin.site.urls),
    path("", include("smtlib_tools.urls")),  # /api/solve/, /api/history/
    path("bench/", include("bench_tools.urls")),  # /bench/api/records/
    path("api-auth/", include("rest_framework.urls")),  # DRF authentication
]
