from django.urls import include, path
from rest_framework import routers

from . import views

router = routers.DefaultRouter()
router.register(r"records", views.BenchRecordViewSet, basename="benchrecord")

app_name = "bench_tools"

urlpatterns = [
    path("api/", include(router.urls)),
]
